"""The compiled kernel and the pure-Python kernel must agree exactly."""

import random

from weildescent import _kernel, _kernel_py


def test_kernels_agree_on_random_polys():
    rng = random.Random(7)
    for _ in range(300):
        la, lb = rng.randint(1, 9), rng.randint(1, 9)
        a = [rng.randint(-50, 50) for _ in range(la)]
        b = [rng.randint(-50, 50) for _ in range(lb)]
        mod = [rng.randint(-5, 5) for _ in range(rng.randint(1, 6))] + [1]
        assert _kernel.zpoly_mul(a, b) == _kernel_py.zpoly_mul(a, b)
        prod = _kernel_py.zpoly_mul(a, b)
        assert _kernel.zpoly_rem(prod, mod) == _kernel_py.zpoly_rem(prod, mod)
        ell = rng.choice([3, 5, 7, 11])
        lm = [c % ell for c in mod[:-1]] + [1]
        assert _kernel.lpoly_mul(a, b, ell) == _kernel_py.lpoly_mul(a, b, ell)
        assert _kernel.lpoly_rem(prod, lm, ell) == _kernel_py.lpoly_rem(prod, lm, ell)


def test_rem_of_short_poly_pads():
    assert _kernel_py.zpoly_rem([5], [1, 2, 1]) == [5, 0]
    assert _kernel.zpoly_rem([5], [1, 2, 1]) == [5, 0]
