import math

import numpy as np
import pytest

from sextic_qes import (
    CouplingParams,
    InvalidCouplingError,
    NoSolutionError,
    QesIndex,
    constraint_gamma,
    reduce,
    solve_constraint,
)


def test_reduce_paper_values():
    r = reduce(CouplingParams(0.0625, 0.5, 0.03))
    assert r.a == pytest.approx(1.25, abs=1e-14)
    assert r.b == pytest.approx(0.10, abs=1e-14)
    # derived by hand; also forced by closure c = -12b at gamma = 15
    assert r.c == pytest.approx(-1.2, rel=1e-12)
    assert r.gamma == pytest.approx(15.0, rel=1e-12)


def test_reduce_trivial_lambda_zero():
    r = reduce(CouplingParams(0.0, 0.0, 3.0))
    assert r.a == 0.0
    assert r.b == pytest.approx(1.0)
    assert r.c == pytest.approx(3.0)
    # omega2 = 0 and lam = 0 zero both terms of gamma; the identity
    # c + b*gamma = sqrt(3*eta) then forces gamma = 0
    assert r.gamma == 0.0


def test_reduce_rejects_nonpositive_eta():
    with pytest.raises(InvalidCouplingError):
        CouplingParams(1.0, 1.0, 0.0)
    with pytest.raises(InvalidCouplingError):
        CouplingParams(1.0, 1.0, -0.1)


def test_constraint_gamma_values():
    assert constraint_gamma(QesIndex(0, 0)) == 3
    assert constraint_gamma(QesIndex(2, 1)) == 13
    assert constraint_gamma(QesIndex(3, 1)) == 17
    assert constraint_gamma(QesIndex(3, 0)) == 15


def test_identity_c_plus_b_gamma(rng):
    # c + b*gamma = sqrt(3*eta) for any couplings
    for _ in range(200):
        p = CouplingParams(rng.normal(0, 3), rng.normal(0, 3), rng.uniform(1e-3, 10))
        r = reduce(p)
        lhs = r.c + r.b * r.gamma
        assert lhs == pytest.approx(math.sqrt(3 * p.eta), rel=1e-12)


def test_closure_equivalence(rng):
    # gamma = 4N+3+2eps  <=>  c + 2b(2N+eps) = 0
    for _ in range(100):
        idx = QesIndex(int(rng.integers(0, 6)), int(rng.integers(0, 2)))
        lam = rng.normal(0, 2)
        eta = rng.uniform(1e-3, 5)
        p = solve_constraint(idx, lam=lam, eta=eta)[0]
        r = reduce(p)
        assert r.gamma == pytest.approx(constraint_gamma(idx), rel=1e-12)
        assert abs(r.c + 2 * r.b * (2 * idx.n_cap + idx.parity)) < 1e-12 * max(1.0, abs(r.c))


def test_solve_omega2_table1():
    p = solve_constraint(QesIndex(3, 0), lam=0.5, eta=0.03)[0]
    assert p.omega_sq == pytest.approx(0.0625, rel=1e-10)


def test_solve_omega2_table2_corrected():
    # constraint-consistent omega2 for the odd N=3 block: 1.5625 - 17/10
    p = solve_constraint(QesIndex(3, 1), lam=0.5, eta=0.03)[0]
    assert p.omega_sq == pytest.approx(-0.1375, rel=1e-10)


def test_solve_omega2_trivial():
    p = solve_constraint(QesIndex(0, 0), lam=0.0, eta=3.0)[0]
    assert p.omega_sq == pytest.approx(-3.0, rel=1e-10)


def test_round_trip_all_unknowns(rng):
    for _ in range(30):
        idx = QesIndex(int(rng.integers(0, 5)), int(rng.integers(0, 2)))
        lam = rng.uniform(0.05, 2)
        eta = rng.uniform(0.01, 5)
        p = solve_constraint(idx, lam=lam, eta=eta)[0]

        got = solve_constraint(idx, lam=p.lam, eta=p.eta)[0]
        assert got.omega_sq == pytest.approx(p.omega_sq, rel=1e-10, abs=1e-12)

        lams = [s.lam for s in solve_constraint(idx, omega_sq=p.omega_sq, eta=p.eta)]
        assert any(l == pytest.approx(p.lam, rel=1e-10) for l in lams)

        etas = [s.eta for s in solve_constraint(idx, omega_sq=p.omega_sq, lam=p.lam)]
        assert any(e == pytest.approx(p.eta, rel=1e-8) for e in etas)


def test_solve_eta_no_solution():
    # lam = 0 and omega2 > 0 makes gamma negative for every eta > 0
    with pytest.raises(NoSolutionError):
        solve_constraint(QesIndex(1, 0), omega_sq=2.0, lam=0.0)


def test_solve_requires_exactly_one_unknown():
    with pytest.raises(ValueError):
        solve_constraint(QesIndex(1, 0), omega_sq=1.0, lam=1.0, eta=1.0)
    with pytest.raises(ValueError):
        solve_constraint(QesIndex(1, 0), lam=1.0)


def test_qes_index_validation():
    with pytest.raises(ValueError):
        QesIndex(-1, 0)
    with pytest.raises(ValueError):
        QesIndex(2, 2)
