"""Random monomial-presented modules over small weighted polynomial rings."""

import random

from gradedext.polyring import GradedMatrix, ModulePresentation, RingPresentation, WeightedRingSpec


def random_ring(rng, max_vars=3, max_weight=2):
    n = rng.randint(1, max_vars)
    weights = tuple(rng.randint(1, max_weight) for _ in range(n))
    spec = WeightedRingSpec(tuple("xyz"[:n]), weights)
    return RingPresentation.polynomial(spec)


def random_monomial_module(rng, ring, max_gens=2, max_degree=3, max_cols=3, name="M"):
    """Cokernel of a matrix whose columns are single monomials."""
    spec = ring.ambient
    rows = [rng.randint(0, max_degree) for _ in range(rng.randint(1, max_gens))]
    entries = [[] for _ in rows]
    cols = []
    for r, deg in enumerate(rows):
        for _ in range(rng.randint(0, max_cols)):
            exps = tuple(rng.randint(0, 2) for _ in spec.variables)
            if not any(exps):
                continue
            mono = spec.monomial(exps)
            for k in range(len(rows)):
                entries[k].append(mono if k == r else spec.zero())
            cols.append(deg + spec.mono_degree(exps))
    return ModulePresentation(ring, GradedMatrix(spec, entries, rows, cols), name)


def random_pair(seed):
    rng = random.Random(seed)
    ring = random_ring(rng)
    return random_monomial_module(rng, ring, name="M"), random_monomial_module(rng, ring, name="N")
