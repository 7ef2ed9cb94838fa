"""Conditional success mass as a function of phase-register bits.

    python3 scripts/quantize_sweep.py --p 7 --char 1
"""
import argparse

from cosetforge.algebra import FiniteField
from cosetforge.characters import MultCharacter
from cosetforge.shift import ShiftInstance, conditional_success_mass


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=7)
    ap.add_argument("--m", type=int, default=1)
    ap.add_argument("--char", type=int, default=1)
    ap.add_argument("--shift", type=int, default=2)
    ap.add_argument("--max-bits", type=int, default=10)
    args = ap.parse_args()
    F = FiniteField(args.p, args.m)
    inst = ShiftInstance.from_character(MultCharacter(F, args.char), args.shift)
    exact = conditional_success_mass(inst)
    print(f"F_{F.q} chi_{args.char}: unquantized mass at -s = {exact:.9f}")
    for bits in range(1, args.max_bits + 1):
        mass = conditional_success_mass(inst, bits)
        print(f"{bits:3d} bits  mass {mass:.9f}  gap {exact - mass:+.2e}")


if __name__ == "__main__":
    main()
