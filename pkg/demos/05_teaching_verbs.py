"""Teaching a verb and its unexpressed-argument default.

The first use of an unknown verb triggers a goal description; the schema
generalizes away whatever the imperative named. A later use that omits an
argument teaches a default, after which the short form runs silently.
"""

from tabletalk import fixtures
from tabletalk.comprehend import ModelConfig
from tabletalk.session import Session
from tabletalk.tasks import network_to_dict
from tabletalk.world import scenario_from_dict

doc, _ = fixtures.task_scene()
session = Session(scenario_from_dict(doc), ModelConfig.from_name("p+t+a+d"))
session.load_lexicon_doc(fixtures.task_lexicon())


def turn(text):
    print("Instructor:", text)
    for line in session.handle_turn(text):
        print("Agent:", line)


print("--- first alternation teaches the schema ---")
turn("store the red cylinder in the pantry.")
turn("the goal is the red cylinder is in the pantry.")
print("Learned template:", network_to_dict(session.networks["store"]))

print("\n--- second alternation teaches defaults ---")
turn("store the green block.")
turn("the goal is the green block is in the pantry.")
print("Defaults now:", dict(session.networks["store"].defaults))

print("\n--- the short form runs without a single question ---")
turn("pick up the green block.")
turn("put it down on the table.")
turn("store the green block.")
print("Green block in pantry:",
      session.spatial_store.holds("in", "green-block", "pantry",
                                  session.state.boxes()))
print("Goal queries asked in total:", session.goal_queries)
