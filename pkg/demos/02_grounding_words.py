"""Grounding words in perception.

Attribute words live in per-attribute nearest-neighbor classifiers; each
word maps to a minted perceptual symbol. Recency of access orders the
active set used for attention.
"""

from tabletalk.memory import GroundingMemory, PERCEPT, attention

mem = GroundingMemory()

print("Teach 'red' and 'blue' with one example each:")
mem.add_training_example("color", (1.0, 0.0, 0.0), "red")
mem.add_training_example("color", (0.0, 0.0, 1.0), "blue")
print("  red ->", mem.lookup("red", PERCEPT))
print("  blue ->", mem.lookup("blue", PERCEPT))

probe = (0.9, 0.1, 0.05)
symbol = mem.classify("color", probe)
print(f"\nClassify {probe}: {symbol.label} "
      f"-> word {mem.word_for_symbol(symbol)!r}")

print("\nA second 'red' example reuses the same symbol:")
again = mem.add_training_example("color", (0.95, 0.05, 0.0), "red")
print("  same symbol:", again == mem.lookup("red", PERCEPT))
print("  color examples stored:", len(mem.classifiers["color"].examples))

print("\nRecency-based activation:")
mem.record_access("cup", 2)
mem.record_access("plate", 8)
mem.record_access("cup", 9)
for obj in ("cup", "plate"):
    print(f"  activation({obj}) at tick 10 = {mem.activation(obj, 10):.3f}")
print("  most active:", mem.top_active(2, now=10))

att = attention(mem, ["cup", "plate", "fork"], o_stack={"fork"}, now=10)
print("\nAttention sets against a percept of cup/plate/fork with fork in focus:")
print("  stack :", sorted(att.o_stack))
print("  active:", list(att.o_active))
print("  attend:", sorted(att.o_attend))
