#!/usr/bin/env python3
"""Writes the 64-bit Hacker's Delight PBE problems into benchmarks/hd/.

Each problem gets a fixed set of edge-case inputs plus seeded random ones,
so reruns produce identical files.
"""

import random
from pathlib import Path

W = 64
M = (1 << W) - 1
OUT = Path(__file__).resolve().parent / "hd"

BINARY = ["bvand", "bvor", "bvxor", "bvadd", "bvsub", "bvmul",
          "bvudiv", "bvurem", "bvshl", "bvlshr", "bvashr"]
UNARY = ["bvnot", "bvneg"]
CONSTS = [0, 1, M]


def s(v):
    return v - (1 << W) if v >> (W - 1) else v


def ashr(a, k):
    return (s(a) >> min(k, W - 1)) & M


def lshr(a, k):
    return a >> k if k < W else 0


PROBLEMS = [
    ("hd01_turn_off_rightmost_one", 1, lambda x: x & (x - 1) & M, []),
    ("hd02_all_ones_below_test", 1, lambda x: x & (x + 1) & M, []),
    ("hd03_isolate_rightmost_one", 1, lambda x: x & -x & M, []),
    ("hd04_rightmost_one_and_trailing_zeros", 1, lambda x: (x ^ (x - 1)) & M, []),
    ("hd05_right_propagate_rightmost_one", 1, lambda x: (x | (x - 1)) & M, []),
    ("hd06_turn_on_rightmost_zero", 1, lambda x: (x | (x + 1)) & M, []),
    ("hd07_isolate_rightmost_zero", 1, lambda x: ~x & (x + 1) & M, []),
    ("hd08_trailing_zeros_mask", 1, lambda x: ~x & (x - 1) & M, []),
    ("hd09_trailing_ones_mask", 1, lambda x: ashr(((x + 1) ^ x) & M, 1), []),
    ("hd10_and_not", 2, lambda x, y: x & ~y & M, []),
    ("hd11_floor_average", 2, lambda x, y: ((x & y) + lshr(x ^ y, 1)) & M, []),
    ("hd12_ceil_average", 2, lambda x, y: ((x | y) - lshr(x ^ y, 1)) & M, []),
    ("hd13_sign", 1, lambda x: ashr(x, 63) | lshr(-x & M, 63), [63]),
    ("hd14_round_up_to_multiple_of_8", 1, lambda x: (x + 7) & (-8 & M), [7]),
    ("hd15_turn_off_rightmost_ones_run", 1,
     lambda x: (((x | (x - 1)) + 1) & M) & x, []),
    ("hd16_absolute_value", 1, lambda x: ((x ^ ashr(x, 63)) - ashr(x, 63)) & M, [63]),
    ("hd17_isolate_rightmost_ones_run", 1,
     lambda x: x & ~((((x | (x - 1)) + 1) & M) & x) & M, []),
    ("hd18_rotate_left_one", 1, lambda x: ((x << 1) | lshr(x, 63)) & M, [63]),
    ("hd19_signed_floor_average", 2, lambda x, y: ((x & y) + ashr(x ^ y, 1)) & M, []),
    ("hd20_signed_ceil_average", 2, lambda x, y: ((x | y) - ashr(x ^ y, 1)) & M, []),
    ("hd21_swap_adjacent_bits", 1,
     lambda x: (lshr(x, 1) & 0x5555555555555555) | ((x & 0x5555555555555555) << 1) & M,
     [0x5555555555555555]),
]

EDGE = [0, 1, 2, 3, 0x8000000000000000, M, M - 1, 0x7FFFFFFFFFFFFFFF]


def lit(v):
    return f"#x{v:016x}"


def grammar(extra):
    consts = " ".join(lit(c) for c in CONSTS + extra)
    ops = " ".join(f"({o} Start)" for o in UNARY)
    ops += " " + " ".join(f"({o} Start Start)" for o in BINARY)
    return consts, ops


def render(name, arity, fn, extra, rng):
    params = ["x", "y"][:arity]
    consts, ops = grammar(extra)
    leaves = " ".join(params)
    decls = " ".join(f"({p} (_ BitVec {W}))" for p in params)
    lines = [
        f"; {name}",
        "(set-logic BV)",
        f"(synth-fun f ({decls}) (_ BitVec {W})",
        f"  ((Start (_ BitVec {W})))",
        f"  ((Start (_ BitVec {W}) ({leaves} {consts}",
        f"    {ops}))))",
    ]
    lines += [f"(declare-var {p} (_ BitVec {W}))" for p in params]
    inputs = []
    for i, e in enumerate(EDGE):
        inputs.append([e] + [EDGE[(i + 3) % len(EDGE)]][: arity - 1])
    for _ in range(4):
        inputs.append([rng.getrandbits(W) for _ in params])
    for args in inputs:
        out = fn(*args)
        call = " ".join(lit(a) for a in args)
        lines.append(f"(constraint (= (f {call}) {lit(out)}))")
    lines.append("(check-synth)")
    return "\n".join(lines) + "\n"


def main():
    OUT.mkdir(exist_ok=True)
    for name, arity, fn, extra in PROBLEMS:
        rng = random.Random(name)
        (OUT / f"{name}.sl").write_text(render(name, arity, fn, extra, rng))


if __name__ == "__main__":
    main()
