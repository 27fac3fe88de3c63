import pytest

from invcat.diagram import is_fibrant_invcat
from invcat.errors import GroupAxiomError, NotPrime
from invcat.orbit import builtin, cp_presentation, cyclic, dihedral, from_table, is_prime, orbit_category, subgroups


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_cyclic_prime_orbit_table(p):
    table = orbit_category(cyclic(p)).hom_table()
    assert table == {("G/e", "G/e"): p, ("G/G", "G/e"): 0, ("G/e", "G/G"): 1, ("G/G", "G/G"): 1}


def test_conjugacy_classes_of_s3():
    data = subgroups(builtin("S3"))
    # e, three conjugate C2s, C3, S3
    assert len(data.subgroups) == 6
    assert len(data.classes) == 4


def test_orbit_category_of_s3():
    O = orbit_category(builtin("S3"))
    table = O.hom_table()
    assert table[("G/e", "G/e")] == 6
    assert table[("G/G", "G/G")] == 1
    assert O.precedence().minimal() == ("G/e",)


def test_dihedral_group_order():
    assert len(dihedral(4)) == 8


def test_group_axioms_are_checked():
    with pytest.raises(GroupAxiomError):
        from_table([0, 1], [[0, 1], [0, 1]])


def test_primality():
    assert [p for p in range(12) if is_prime(p)] == [2, 3, 5, 7, 11]
    with pytest.raises(NotPrime):
        cp_presentation(4)


@pytest.mark.parametrize("p,n,sizes", [(2, 3, (1, 2, 4, 8)), (3, 2, (1, 3, 9))])
def test_cp_presentation_is_fibrant(p, n, sizes):
    I = cp_presentation(p, n)
    assert I.spaces["G/e"].sizes() == sizes
    assert is_fibrant_invcat(I)
