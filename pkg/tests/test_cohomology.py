import random

import pytest

from polyarith.cohomology import (
    CohomologyGroup,
    Derivation,
    DerivationLattice,
    commutant_lattice,
    conjugate_derivation,
    conjugation_action,
    derivation_space,
    equivariant_units,
    h1,
    is_derivation,
    principal_derivation,
    principal_derivations,
    rewriting_table,
    word_value,
)
from polyarith.errors import PreconditionError
from polyarith.linalg import Matrix, in_row_lattice
from polyarith.presentations import ModuleAction, Presentation, dihedral_presentation
from polyarith.semidirect import build_gamma_epsilon

from oracles import finite_group_h1

# ---------------------------------------------------------------------------
# finite test groups: presentation, faithful permutations, actions


def cyclic_presentation(n, name="r"):
    return Presentation((name,), (((0, 1),) * n,))


KLEIN = Presentation(
    ("s", "t"),
    (
        ((0, 1), (0, 1)),
        ((1, 1), (1, 1)),
        ((0, 1), (1, 1), (0, 1), (1, 1)),
    ),
)

SYM3 = Presentation(
    ("r", "s"),
    (
        ((0, 1), (0, 1), (0, 1)),
        ((1, 1), (1, 1)),
        ((0, 1), (1, 1), (0, 1), (1, 1)),
    ),
)

ROT3 = Matrix([[0, -1], [1, -1]])
SWAP = Matrix([[0, 1], [1, 0]])

FINITE_CASES = [
    # (label, presentation, generator permutations, matrices, group order)
    ("C2 sign on Z", cyclic_presentation(2, "t"), [(1, 0)], [Matrix([[-1]])], 2),
    ("C2 trivial on Z", cyclic_presentation(2, "t"), [(1, 0)], [Matrix([[1]])], 2),
    ("C2 swap on Z^2", cyclic_presentation(2, "t"), [(1, 0)], [SWAP], 2),
    ("C2 minus one on Z^2", cyclic_presentation(2, "t"), [(1, 0)], [-Matrix.identity(2)], 2),
    ("C3 rotation on Z^2", cyclic_presentation(3), [(1, 2, 0)], [ROT3], 3),
    (
        "C3 cycle on Z^3",
        cyclic_presentation(3),
        [(1, 2, 0)],
        [Matrix([[0, 0, 1], [1, 0, 0], [0, 1, 0]])],
        3,
    ),
    (
        "Klein signs on Z^2",
        KLEIN,
        [(1, 0, 3, 2), (2, 3, 0, 1)],
        [Matrix([[-1, 0], [0, 1]]), Matrix([[1, 0], [0, -1]])],
        4,
    ),
    (
        "Klein blocks on Z^4",
        KLEIN,
        [(1, 0, 3, 2), (2, 3, 0, 1)],
        [
            Matrix([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
            Matrix([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]]),
        ],
        4,
    ),
    ("S3 standard on Z^2", SYM3, [(1, 2, 0), (1, 0, 2)], [ROT3, SWAP], 6),
    (
        "S3 permutation on Z^3",
        SYM3,
        [(1, 2, 0), (1, 0, 2)],
        [
            Matrix([[0, 0, 1], [1, 0, 0], [0, 1, 0]]),
            Matrix([[0, 1, 0], [1, 0, 0], [0, 0, 1]]),
        ],
        6,
    ),
    (
        "S3 standard plus sign plus trivial on Z^4",
        SYM3,
        [(1, 2, 0), (1, 0, 2)],
        [
            Matrix([[0, -1, 0, 0], [1, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
            Matrix([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]]),
        ],
        6,
    ),
]


def case_action(case):
    _, pres, _, mats, _ = case
    return pres, ModuleAction(mats[0].nrows, tuple(mats))


# ---------------------------------------------------------------------------
# derivations


def test_derivation_flatten_roundtrip():
    d = Derivation(((1, 2), (3, 4)))
    assert d.flatten() == (1, 2, 3, 4)
    assert Derivation.unflatten((1, 2, 3, 4), 2) == d
    assert (-d).values == ((-1, -2), (-3, -4))


def test_word_value_cocycle_rule():
    pres, action = case_action(FINITE_CASES[0])
    d = Derivation(((1,),))
    # d(t t) = d(t) + t . d(t) = 1 - 1 = 0
    assert word_value(action, d, ((0, 1), (0, 1))) == (0,)
    # d(t^-1) = -t^-1 d(t)
    assert word_value(action, d, ((0, -1),)) == (1,)


def test_is_derivation_checks_relators():
    pres, action = case_action(FINITE_CASES[0])
    assert is_derivation(pres, action, Derivation(((1,),)))
    pres3 = cyclic_presentation(3)
    action3 = ModuleAction(2, (ROT3,))
    assert is_derivation(pres3, action3, Derivation(((1, 0),)))
    # trivial action on Z: d(r) must vanish three-fold, so any nonzero fails
    triv = ModuleAction(1, (Matrix([[1]]),))
    assert not is_derivation(pres3, triv, Derivation(((1,),)))


def test_principal_derivation_values():
    pres, action = case_action(FINITE_CASES[0])
    d = principal_derivation(action, (1,))
    assert d.values == ((-2,),)  # (t - 1) . 1 = -2


class TestDerivationLattice:
    def setup_method(self):
        ge = build_gamma_epsilon(3)
        self.group = ge.group
        self.lat = derivation_space(self.group.presentation, self.group.action)

    def test_rank_four(self):
        assert self.lat.rank == 4

    def test_frozen_hermite_basis(self):
        assert [d.values for d in self.lat.basis] == [
            ((1, 0, 0), (0, -1, 0)),
            ((0, 1, 0), (0, 1, 0)),
            ((0, 0, 1), (0, 0, 0)),
            ((0, 0, 0), (0, 0, 1)),
        ]

    def test_every_basis_element_is_a_derivation(self):
        for d in self.lat.basis:
            assert is_derivation(self.group.presentation, self.group.action, d)

    def test_coordinates_roundtrip(self):
        d = self.lat.combination((2, -1, 0, 5))
        assert self.lat.coordinates(d) == (2, -1, 0, 5)
        assert self.lat.contains(d)

    def test_non_derivation_is_outside(self):
        bogus = Derivation(((1, 0, 0), (1, 0, 0)))
        if not is_derivation(self.group.presentation, self.group.action, bogus):
            assert self.lat.coordinates(bogus) is None

    def test_principal_lattice_inside_derivation_lattice(self):
        prin = principal_derivations(self.group.action)
        full = self.lat.basis_matrix()
        for i in range(prin.nrows):
            assert in_row_lattice(full, prin.row(i))

    def test_principal_frozen(self):
        prin = principal_derivations(self.group.action)
        assert prin == Matrix(
            [[1, 1, 0, 0, 0, 0], [0, 2, 0, 0, 2, 0], [0, 0, 0, 0, 0, 2]]
        )


# ---------------------------------------------------------------------------
# h1


def test_h1_cyclic_two_sign_is_z_mod_2():
    pres, action = case_action(FINITE_CASES[0])
    group = h1(pres, action)
    assert group.free_rank == 0
    assert group.torsion == (2,)
    assert group.order() == 2
    assert str(group) == "Z/2"


def test_h1_trivial_group():
    pres = Presentation(("a",), (((0, 1),),))
    action = ModuleAction(2, (Matrix.identity(2),))
    group = h1(pres, action)
    assert group.is_trivial()
    assert group.order() == 1


def test_h1_infinite_cyclic_sign():
    pres = Presentation(("x",), ())
    action = ModuleAction(1, (Matrix([[-1]]),))
    group = h1(pres, action)
    assert (group.free_rank, group.torsion) == (0, (2,))


def test_h1_gamma_epsilon_structure():
    ge = build_gamma_epsilon(3)
    group = h1(ge.group.presentation, ge.group.action)
    assert group.free_rank == 1
    assert group.torsion == (2, 2)
    assert group.order() is None
    assert str(group) == "Z + Z/2 + Z/2"


def test_cohomology_group_validation():
    with pytest.raises(PreconditionError):
        CohomologyGroup(-1, ())
    with pytest.raises(PreconditionError):
        CohomologyGroup(0, (1,))
    with pytest.raises(PreconditionError):
        CohomologyGroup(0, (4, 2))  # chain must divide upward


@pytest.mark.parametrize("case", FINITE_CASES, ids=[c[0] for c in FINITE_CASES])
def test_h1_matches_brute_force_oracle(case):
    label, pres, perms, mats, order = case
    action = ModuleAction(mats[0].nrows, tuple(mats))
    got = h1(pres, action)
    z_rank, free, torsion = finite_group_h1(
        [tuple(p) for p in perms], [m.entries for m in mats], order
    )
    assert derivation_space(pres, action).rank == z_rank
    assert got.free_rank == free == 0
    assert got.torsion == torsion


# ---------------------------------------------------------------------------
# conjugation of derivations


class TestConjugation:
    def setup_method(self):
        ge = build_gamma_epsilon(3)
        self.group = ge.group
        self.pres = self.group.presentation
        self.action = self.group.action
        self.engine = self.group.engine
        self.lat = derivation_space(self.pres, self.action)

    def matrix_of(self, word):
        return conjugation_action(word, rewriting_table(self.engine, word), self.lat)

    def test_frozen_generator_matrices(self):
        assert self.matrix_of(((0, 1),)) == Matrix(
            [[2, 1, 0, 0], [3, 2, 0, 0], [0, 0, 1, -2], [0, 0, 0, 1]]
        )
        assert self.matrix_of(((1, 1),)) == Matrix(
            [[-2, -1, 0, 0], [3, 2, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]]
        )

    def test_composition_reverses(self):
        rng = random.Random(17)
        words = [((0, 1),), ((1, 1),), ((0, -1),), ((0, 1), (1, 1))]
        for w1 in words:
            for w2 in words:
                prod = self.engine.to_word(
                    self.engine.normal_form(tuple(w1) + tuple(w2))
                )
                assert self.matrix_of(prod) == self.matrix_of(w2) * self.matrix_of(w1)

    def test_reflection_action_is_involution(self):
        m = self.matrix_of(((1, 1),))
        assert m * m == Matrix.identity(4)

    def test_unimodular(self):
        for w in [((0, 1),), ((1, 1),), ((0, 1), (1, 1))]:
            assert self.matrix_of(w).det() in (1, -1)

    def test_conjugate_stays_a_derivation(self):
        rng = random.Random(23)
        for _ in range(25):
            d = self.lat.combination(tuple(rng.randint(-3, 3) for _ in range(4)))
            for w in [((0, 1),), ((1, 1),)]:
                image = conjugate_derivation(
                    self.action, d, rewriting_table(self.engine, w)
                )
                assert is_derivation(self.pres, self.action, image)
                assert self.lat.contains(image)

    def test_conjugation_preserves_principal_derivations(self):
        prin = principal_derivations(self.action)
        for w in [((0, 1),), ((1, 1),)]:
            table = rewriting_table(self.engine, w)
            for i in range(prin.nrows):
                d = Derivation.unflatten(prin.row(i), self.action.rank)
                image = conjugate_derivation(self.action, d, table)
                assert in_row_lattice(prin, image.flatten())

    def test_conjugate_of_principal_shifts_the_vector(self):
        # g * d_f = d_{g.f}
        for w in [((0, 1),), ((1, 1),), ((0, 1), (1, 1))]:
            table = rewriting_table(self.engine, w)
            mg = self.group.form_matrix(self.engine.normal_form(w))
            for f in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (2, -1, 3)]:
                d = principal_derivation(self.action, f)
                image = conjugate_derivation(self.action, d, table)
                assert image == principal_derivation(self.action, mg.apply(f))

    def test_wrong_table_rejected(self):
        w1, w2 = ((0, 1),), ((1, 1),)
        with pytest.raises(PreconditionError):
            conjugation_action(w1, rewriting_table(self.engine, w2), self.lat)


# ---------------------------------------------------------------------------
# equivariant units


def test_equivariant_units_trivial_action():
    action = ModuleAction(1, (Matrix([[1]]),))
    units = equivariant_units(action, 1)
    assert units == [Matrix([[-1]]), Matrix([[1]])]


def test_equivariant_units_swap_action():
    action = ModuleAction(2, (SWAP,))
    units = equivariant_units(action, 1)
    expected = {
        Matrix([[1, 0], [0, 1]]),
        Matrix([[-1, 0], [0, -1]]),
        Matrix([[0, 1], [1, 0]]),
        Matrix([[0, -1], [-1, 0]]),
    }
    assert set(units) == expected
    assert len(units) == 4


def test_equivariant_units_gamma_epsilon():
    ge = build_gamma_epsilon(3)
    units = equivariant_units(ge.group.action, 10)
    expected = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            expected.append(Matrix([[s1, 0, 0], [0, s1, 0], [0, 0, s2]]))
    assert sorted(units, key=lambda m: m.entries) == sorted(
        expected, key=lambda m: m.entries
    )


def test_equivariant_units_commute_and_are_units():
    ge = build_gamma_epsilon(5)
    units = equivariant_units(ge.group.action, 3)
    for u in units:
        assert u.det() in (1, -1)
        for m in ge.group.action.matrices:
            assert u * m == m * u


def test_equivariant_units_bound_monotone():
    action = ModuleAction(1, (Matrix([[1]]),))
    small = set(equivariant_units(action, 1))
    large = set(equivariant_units(action, 3))
    assert small <= large
    assert Matrix([[3]]) not in large  # determinant filter if bound admits non-units


def test_commutant_lattice_ranks():
    ge = build_gamma_epsilon(3)
    assert commutant_lattice(ge.group.action).nrows == 2
    assert commutant_lattice(ModuleAction(2, (SWAP,))).nrows == 2
    assert commutant_lattice(ModuleAction(2, (Matrix.identity(2),))).nrows == 4
