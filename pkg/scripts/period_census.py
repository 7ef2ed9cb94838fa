"""Tally of additive periods of multiplicative characters on Z/p^m.

    python3 scripts/period_census.py --limit 400
"""
import argparse
from collections import Counter

from cosetforge.algebra import ResidueRing, factorize
from cosetforge.characters import char_period_prime_power, enumerate_mult_chars, minimal_period


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--limit", type=int, default=400)
    args = ap.parse_args()
    mismatches = 0
    for N in range(3, args.limit + 1, 2):
        f = factorize(N)
        if len(f) != 1 or f[0][1] == 1:
            continue
        (p, m), = f
        tally = Counter()
        for chi in enumerate_mult_chars(ResidueRing(N)):
            k = chi.index[0]
            T = minimal_period(chi.exponents()[0], exhaustive=True)
            mismatches += T != char_period_prime_power(p, m, k)
            tally[T] += 1
        print(f"Z/{N:<4}", "  ".join(f"T={T}: {c}" for T, c in sorted(tally.items())))
    print(f"mismatches against p^j: {mismatches}")


if __name__ == "__main__":
    main()
