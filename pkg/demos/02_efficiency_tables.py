"""Predicted costs, their closed forms, and a seeded reality check.

Run:  python3 demos/02_efficiency_tables.py
The same tables are available from the command line:
  debias analyze --metric tosses
  debias analyze --metric time --format csv
"""

from debias import (
    TABLE_BIASES,
    format_table,
    processing_time,
    simulate_efficiency,
    time_table,
    tosses_table,
)

print("Expected tosses per output bit (rows: depth limit; 'limit' = 1/entropy):\n")
print(format_table(tosses_table(), TABLE_BIASES))

print("\nExpected node deliveries per input symbol:\n")
print(format_table(time_table(), TABLE_BIASES))

# At p = 1/2 both quantities collapse to closed forms.
print("\nbalanced coin closed forms:")
print("  rate(1/2, d) = 1 - (3/4)^(d+1)")
print("  time(1/2, d) = 4 - 3*(3/4)^d")
for d in (0, 2, 5, 10):
    print(f"    d={d:2d}: time={processing_time(0.5, d):.6f} "
          f"vs {4 - 3 * 0.75**d:.6f}")

# And the predictions hold up against an actual seeded run.
print("\nseeded check (p=0.3, depth 7, 100k bits):")
r = simulate_efficiency(0.3, 7, 100_000, seed=2026)
print(f"  observed  {r.tosses_per_bit:.4f} tosses/bit, "
      f"{r.messages_per_symbol:.4f} deliveries/symbol")
print(f"  predicted {r.expected_tosses_per_bit:.4f} tosses/bit, "
      f"{r.expected_messages_per_symbol:.4f} deliveries/symbol")
