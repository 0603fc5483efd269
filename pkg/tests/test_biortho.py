"""Biorthonormal eigensystem construction and its invariants."""

import numpy as np
import pytest

from quasic.biortho import (
    biortho_system,
    check_left_right_parity_relation,
    completeness_residual,
)
from quasic.errors import DefectiveMatrixError, NearlyDefectiveError
from quasic.invariants import InvariantForm, closed_form_invariant
from quasic.linalg import IDENTITY, PAULI_X, PAULI_Z, adjoint, frobenius_norm
from quasic.model import HamiltonianParams, hamiltonian_at

RNG = np.random.default_rng(99)


def random_diagonalizable(min_gap=0.3):
    while True:
        a = RNG.standard_normal((2, 2)) + 1j * RNG.standard_normal((2, 2))
        tr = a[0, 0] + a[1, 1]
        disc = (0.5 * tr) ** 2 - (a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0])
        if abs(np.sqrt(disc)) > min_gap:
            return a


def test_sigma_z_system():
    sys_z = biortho_system(PAULI_Z)
    first, second = sys_z.pairs
    assert first.eigenvalue == 1 and second.eigenvalue == -1
    assert np.allclose(np.abs(first.right), [1, 0])
    assert np.allclose(first.left, first.right)
    assert np.allclose(second.left, second.right)


def test_model_hamiltonian_eigenvectors():
    lam, kappa = 2.0, 1.0
    p = HamiltonianParams(1.0, lam, kappa)
    sys_h = biortho_system(hamiltonian_at(p, 0.0))
    root = np.sqrt(lam**2 - kappa**2)
    for pair in sys_h.pairs:
        sign = 1.0 if pair.eigenvalue.real > -0.5 else -1.0
        ref = np.array([1j * (-lam + sign * root), kappa])
        # proportionality: cross determinant vanishes
        cross = pair.right[0] * ref[1] - pair.right[1] * ref[0]
        assert abs(cross) < 1e-12


def test_completeness_and_cross_orthogonality():
    for _ in range(50):
        a = random_diagonalizable()
        sys_a = biortho_system(a)
        assert completeness_residual(sys_a) < 1e-10
        for n, pn in enumerate(sys_a.pairs):
            for m, pm in enumerate(sys_a.pairs):
                expected = 1.0 if n == m else 0.0
                assert np.vdot(pn.left, pm.right) == pytest.approx(expected, abs=1e-10)


def test_left_eigen_relation():
    for _ in range(20):
        a = random_diagonalizable()
        sys_a = biortho_system(a)
        for pair in sys_a.pairs:
            resid = np.linalg.norm(
                adjoint(a) @ pair.left - np.conj(pair.eigenvalue) * pair.left
            )
            assert resid < 1e-9 * max(1.0, frobenius_norm(a)) * np.linalg.norm(pair.left)


def test_hermitian_input_reduces_to_orthonormal():
    for _ in range(20):
        a = RNG.standard_normal((2, 2)) + 1j * RNG.standard_normal((2, 2))
        a = a + adjoint(a) + np.diag([2.0, -1.0])
        sys_a = biortho_system(a)
        for pair in sys_a.pairs:
            overlap = np.vdot(pair.left, pair.right)
            assert abs(abs(overlap) - 1.0) < 1e-10
            assert np.linalg.norm(np.abs(pair.left) - np.abs(pair.right)) < 1e-10


def test_defective_at_coalescence():
    p = HamiltonianParams(1.0, 1.0, 1.0)
    with pytest.raises(DefectiveMatrixError):
        biortho_system(hamiltonian_at(p, 0.0))
    with pytest.raises(DefectiveMatrixError):
        biortho_system(np.array([[1.0, 1.0], [0.0, 1.0]]))


def test_nearly_defective():
    # eigenvalues 1 and 2 are distinct at tol=1e-14 but the eigenvectors are
    # parallel to one part in 1e13, tripping the condition guard
    with pytest.raises(NearlyDefectiveError):
        biortho_system(np.array([[1.0, 1e13], [0.0, 2.0]]), tol=1e-14)


def test_completeness_residual_detects_zeroed_left():
    sys_z = biortho_system(PAULI_Z)
    broken = type(sys_z)(
        pairs=(
            type(sys_z.pairs[0])(
                eigenvalue=sys_z.pairs[0].eigenvalue,
                right=sys_z.pairs[0].right,
                left=np.zeros(2, dtype=complex),
            ),
            sys_z.pairs[1],
        ),
        source=sys_z.source,
    )
    assert completeness_residual(broken) == pytest.approx(1.0)


def test_parity_link_hamiltonian():
    p = HamiltonianParams(1.0, 2.0, 1.0)
    sys_h = biortho_system(hamiltonian_at(p, 0.0))
    assert check_left_right_parity_relation(sys_h, (-1, 1)) < 1e-10


def test_parity_link_invariant():
    p = HamiltonianParams(1.0, 2.0, 1.0)
    inv = closed_form_invariant(InvariantForm.PT_SYMMETRIC, p, 0.8)
    sys_i = biortho_system(inv)
    assert check_left_right_parity_relation(sys_i, (1, 1)) < 1e-10


def test_parity_link_fails_for_sigma_x():
    sys_x = biortho_system(PAULI_X)
    for signs in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
        assert check_left_right_parity_relation(sys_x, signs) > 0.1


def test_gauge_invariance_of_projector_sum():
    p = HamiltonianParams(1.0, 2.0, 1.0)
    sys_h = biortho_system(hamiltonian_at(p, 0.0))

    def weighted_sum(pairs, signs=(1, -1)):
        return sum(
            s * np.outer(pr.right, np.conj(pr.left)) for s, pr in zip(signs, pairs)
        )

    base = weighted_sum(sys_h.pairs)
    for _ in range(50):
        scales = RNG.uniform(0.1, 10.0, size=2) * np.exp(2j * np.pi * RNG.uniform(size=2))
        rescaled = [
            type(pr)(eigenvalue=pr.eigenvalue, right=c * pr.right, left=pr.left / np.conj(c))
            for c, pr in zip(scales, sys_h.pairs)
        ]
        assert frobenius_norm(weighted_sum(rescaled) - base) < 1e-12


def test_pair_order_puts_positive_parity_norm_first():
    # the pair whose right vector has positive <v|sigma_z|v> leads, so the
    # (+1, -1) signature induces the positive-definite metric
    p = HamiltonianParams(1.0, 2.0, 1.0)
    sys_h = biortho_system(hamiltonian_at(p, 0.0))
    w0 = np.real(np.vdot(sys_h.pairs[0].right, PAULI_Z @ sys_h.pairs[0].right))
    w1 = np.real(np.vdot(sys_h.pairs[1].right, PAULI_Z @ sys_h.pairs[1].right))
    assert w0 > 0 > w1
    assert np.allclose(
        sum(s * np.outer(pr.right, np.conj(pr.left)) for s, pr in zip((1, 1), sys_h.pairs)),
        IDENTITY,
    )
