"""Independent reference values for permission log fixture.

Computes information-theoretic quantities and FD candidates by direct
counting, without touching the C++ implementation. The printed numbers are
frozen into tests/test_stats.cpp and tests/test_fd.cpp.

Run: python3 tests/oracles/permission_oracle.py data/permission_normal.csv
"""
import csv
import math
import sys
from collections import Counter, defaultdict

NONE = "__NONE__"
ATTRS = ["Type", "Activity", "UserID", "UserName", "UserRole"]


def load(path):
    traces = defaultdict(list)
    order = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            tid = row["tID"]
            if tid not in traces:
                order.append(tid)
            traces[tid].append({a: row[a].strip() for a in ATTRS})
    return [traces[t] for t in order]


def k_context(traces, k):
    rows = []
    for events in traces:
        for i, ev in enumerate(events):
            row = {}
            for s in range(k, 0, -1):
                for a in ATTRS:
                    row[(a, s)] = events[i - s][a] if i - s >= 0 else NONE
            for a in ATTRS:
                row[(a, 0)] = ev[a]
            rows.append(row)
    return rows


def entropy(col):
    n = len(col)
    return -sum(c / n * math.log(c / n) for c in Counter(col).values())


def mutual_information(x, y):
    n = len(x)
    px, py, pxy = Counter(x), Counter(y), Counter(zip(x, y))
    total = 0.0
    for (a, b), c in pxy.items():
        pab = c / n
        total += pab * math.log(pab / ((px[a] / n) * (py[b] / n)))
    return total


def uncertainty(x, y):
    h = entropy(x)
    return 1.0 if h == 0 else mutual_information(x, y) / h


def main(path):
    traces = load(path)
    ctx = k_context(traces, 1)
    col = lambda a, s: [r[(a, s)] for r in ctx]

    print("H(UserID_0) =", repr(entropy(col("UserID", 0))))
    print("counts UserID_0 =", Counter(col("UserID", 0)))
    print("I(UserID_0;UserRole_0) =",
          repr(mutual_information(col("UserID", 0), col("UserRole", 0))))
    print("U(UserRole_0|UserID_0) =",
          repr(uncertainty(col("UserRole", 0), col("UserID", 0))))
    print("H(UserID_1) =", repr(entropy(col("UserID", 1))))
    print("I(UserID_1;UserID_0) =",
          repr(mutual_information(col("UserID", 1), col("UserID", 0))))
    print("U(UserID_1|UserID_0) =",
          repr(uncertainty(col("UserID", 1), col("UserID", 0))))

    variables = [(a, s) for s in (1, 0) for a in ATTRS]
    print("FDs at threshold 0.99 (source -> target, U):")
    for target in ATTRS:
        for src in variables:
            if src == (target, 0):
                continue
            u = uncertainty(col(target, 0), col(*src))
            if u > 0.99:
                print(f"  {src[0]}_{src[1]} -> {target}_0  U={u!r}")

    print("marginal UserRole_0 =", Counter(col("UserRole", 0)))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/permission_normal.csv")
