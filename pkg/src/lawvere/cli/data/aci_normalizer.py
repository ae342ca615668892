"""Normal forms for one associative, commutative, idempotent binary operation.

Reads one term per line and answers with its normal form: the sorted set of
its leaves, folded to the left.
"""
import re
import sys

for line in sys.stdin:
    line = line.strip()
    ops = set(re.findall(r"([A-Za-z_][\w'-]*)\(", line))
    leaves = sorted(set(re.findall(r"x\d+|[A-Za-z_][\w'-]*(?![\w('-])", line)) - ops,
                    key=lambda s: (0, int(s[1:])) if re.fullmatch(r"x\d+", s) else (1, s))
    op = next(iter(ops), None)
    out = leaves[0]
    for leaf in leaves[1:]:
        out = f"{op}({out},{leaf})"
    print(out, flush=True)
