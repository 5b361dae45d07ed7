"""Regenerate the built-in breakpoint table in src/saxdiscord/sax.py.

Breakpoints for an alphabet of size a are the inverse standard normal CDF
evaluated at k/a, k = 1..a-1.

    python tools/gen_breakpoints.py > /tmp/table.txt
"""
from statistics import NormalDist


def breakpoints(size):
    dist = NormalDist()
    return tuple(dist.inv_cdf(k / size) for k in range(1, size))


if __name__ == "__main__":
    print("_BREAKPOINTS = {")
    for size in range(2, 11):
        values = ", ".join(repr(round(v, 16) + 0.0) for v in breakpoints(size))
        print(f"    {size}: ({values},),")
    print("}")
