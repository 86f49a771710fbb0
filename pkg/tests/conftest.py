import pytest

from hklat import factor as fc
from hklat import lattice as lt
from hklat import transvect as tv


@pytest.fixture(scope="session")
def k3():
    return lt.preset("K3")


@pytest.fixture(scope="session")
def k3n2():
    return lt.preset("K3n", 2)


@pytest.fixture(scope="session")
def kummer2():
    return lt.preset("Kummer", 2)


def rand_vec(rng, lat, bound=2):
    return lat.vec([rng.randint(-bound, bound) for _ in range(lat.rank)])


def rand_primitive(rng, lat, bound=2):
    while True:
        v = rand_vec(rng, lat, bound)
        if not v.is_zero() and v.is_primitive():
            return v


def rand_primitive_norm(rng, lat, norm, tries=20000):
    """Random primitive vector of the given norm, supported mostly on the
    hyperbolic summands so positive norms are reachable."""
    nu = len(lat.u_blocks) * 2
    for _ in range(tries):
        c = [0] * lat.rank
        for (i, j) in lat.u_blocks:
            c[i] = rng.randint(-3, 3)
            c[j] = rng.randint(-3, 3)
        for k in range(nu, min(lat.rank, nu + 4)):
            c[k] = rng.randint(-1, 1)
        v = lat.vec(c)
        if not v.is_zero() and v.is_primitive() and v.norm() == norm:
            return v
    raise AssertionError("no primitive vector of norm %s found" % norm)


def rand_anisotropic(rng, lat, bound=2):
    while True:
        v = rand_vec(rng, lat, bound)
        if v.norm() != 0:
            return v


def rand_reflection_word(rng, lat, count=3, bound=2):
    f = lt.QIsometry.identity(lat)
    for _ in range(count):
        f = fc.reflect(lat, rand_anisotropic(rng, lat, bound)) * f
    return f


def rand_orientation_preserving(rng, lat, count=3, bound=2):
    f = rand_reflection_word(rng, lat, count, bound)
    if lt.nu_character(f) == -1:
        i, j = lat.u_blocks[0]
        c = [0] * lat.rank
        c[i], c[j] = 1, -1
        f = fc.reflect(lat, lat.vec(c)) * f
    return f


def rand_transvection(rng, lat, bound=1):
    i, j = rng.choice(lat.u_blocks)
    e = lat.basis_vec(rng.choice([i, j]))
    while True:
        a = rand_vec(rng, lat, bound)
        if not a.is_zero() and lat.pair_coords(e.coords, a.coords) == 0:
            return tv.eichler_transvection(lat, e, a)
