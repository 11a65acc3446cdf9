"""Time the compiled kernels against the pure-Python reference.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import random
import timeit

from hmftheta.kernels import _pure

try:
    from hmftheta.kernels import _ckernels
except ImportError:
    _ckernels = None


def cauchy_case(rng, n=60, rank=2, p=3, modulus=(1, 0, 1)):
    k = len(modulus) - 1

    def side():
        exps = list({tuple(rng.randint(0, 30) for _ in range(rank)) for _ in range(n)})
        return exps, [tuple(rng.randrange(p) for _ in range(k)) for _ in exps]

    a, b = side(), side()
    return (*a, *b, [2, 0], 60, 1, modulus, p)


def cone_case(p=13, e=4, f=4):
    from hmftheta.shape import FieldShape, ThetaIndex
    from hmftheta.weights import WeightVector, hasse_matrix, hbasis_decompose
    from math import ceil

    shape = FieldShape.single(p, e, f)
    target = 2 * WeightVector.unit(shape, ThetaIndex("P", 0, e))
    caps = [ceil(x) for x in hbasis_decompose(target)]
    return (list(target.entries), [list(r) for r in hasse_matrix(shape)], caps,
            shape.multipliers(), shape.sigma_inv_perm())


def mulmod_case(rng, p=13, modulus=(2, 0, 0, 0, 1, 1)):
    k = len(modulus) - 1
    pairs = [(tuple(rng.randrange(p) for _ in range(k)), tuple(rng.randrange(p) for _ in range(k)))
             for _ in range(2000)]
    return pairs, modulus, p


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = random.Random(0)

    cauchy = cauchy_case(rng)
    cone = cone_case()
    pairs, modulus, p = mulmod_case(rng)
    cases = {
        "cauchy_product": lambda mod: mod.cauchy_product(*cauchy),
        "cone_box_search": lambda mod: mod.cone_box_search(*cone),
        "poly_mulmod x2000": lambda mod: [mod.poly_mulmod(a, b, modulus, p) for a, b in pairs],
    }
    backends = [("pure", _pure)] + ([("compiled", _ckernels)] if _ckernels else [])
    print(f"{'kernel':<20}" + "".join(f"{name:>12}" for name, _ in backends) + "     speedup")
    for label, fn in cases.items():
        times = []
        results = []
        for _, mod in backends:
            results.append(fn(mod))
            times.append(min(timeit.repeat(lambda: fn(mod), number=1, repeat=args.repeat)))
        assert all(r == results[0] for r in results), f"{label}: backends disagree"
        speed = f"{times[0] / times[1]:10.1f}x" if len(times) > 1 else ""
        print(f"{label:<20}" + "".join(f"{t * 1e3:10.2f}ms" for t in times) + speed)
    if _ckernels is None:
        print("compiled kernels not built; only the pure backend was timed")


if __name__ == "__main__":
    main()
