from __future__ import annotations

import itertools
import json
from fractions import Fraction
from pathlib import Path

import pytest

from zhukit.enveloping import ModeAlgebra
from zhukit.lca import current_sl2, virasoro
from zhukit.modules import (CutoffError, InducedModule, ModuleError, ZhuModuleInput, borcherds_defect,
                            check_akbk, check_THann, check_zhu_action, compose_modes, default_module_input,
                            induce, j_annihilation, run_module_suite, trivial_input, verma)
from zhukit.scalars import C, LAM, ONE, PolyScalar
from zhukit.suites import j_generators
from zhukit.vertex import VAC, VertexAlgebra

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="module")
def M(vir_va):
    return verma(vir_va, 4)


def test_verma_dimensions(M):
    assert M.dims() == [1, 1, 2, 3, 5]


def test_trivial_sl2_dimensions(sl2_va):
    T = induce(sl2_va, trivial_input(sl2_va.alg), 0, 2)
    assert T.dims() == [1, 3, 9]


def test_virasoro_relations_on_vectors(M):
    x = M.vector()
    assert M.act_word([(1, 0), (-1, 0)], x) == {((), 0): LAM * 2}
    assert M.act_word([(2, 0), (-2, 0)], x) == {((), 0): LAM * 4 + C * Fraction(1, 2)}
    assert M.act("L", 1, x) == {}


def test_zero_mode_of_composite_state(vir_va, M):
    w2 = vir_va.nth(vir_va.gen("L"), vir_va.gen("L"), -1)
    assert M.state_mode(w2, 0, M.vector()) == {((), 0): LAM * LAM + LAM * 2}


def test_vacuum_acts_as_identity(M):
    for d in range(3):
        for key in M.basis(d):
            assert M.state_mode(VAC, 0, {key: ONE}) == {key: ONE}


def test_L0_is_depth_shift(vir_va, M):
    for d in range(5):
        for key in M.basis(d):
            assert M.act("L", 0, {key: ONE}) == {key: LAM + d}


def test_borcherds_grid_sample(vir_va, M):
    states = vir_va.basis_upto(4)
    for a, b in itertools.product(states, repeat=2):
        for m, k, n in itertools.product(range(-2, 3), range(-2, 3), range(-2, 2)):
            for key in M.basis(0) + M.basis(1):
                assert borcherds_defect(M, {a: ONE}, {b: ONE}, m, k, n, {key: ONE}) == {}


def test_level_p_checks(vir_va, M):
    states = vir_va.basis_upto(4)
    for p in range(3):
        for a, b in itertools.product(states, repeat=2):
            for key in M.basis(p):
                x = {key: ONE}
                assert check_zhu_action(M, {a: ONE}, {b: ONE}, p, x) == {}
                for k in range(p + 1):
                    assert check_akbk(M, {a: ONE}, {b: ONE}, k, p, x) == {}


def test_zhu_action_is_level_specific(vir_va, M):
    # above degree p the level-p product no longer acts as the composite of zero modes
    omega = vir_va.gen("L")
    x1, x2 = {M.basis(1)[0]: ONE}, {M.basis(2)[0]: ONE}
    assert check_zhu_action(M, omega, omega, 0, x1) == {(((-1, 0),), 0): LAM * 4}
    assert check_zhu_action(M, omega, omega, 1, x2) != {}
    assert check_zhu_action(M, omega, omega, 2, x2) == {}


def test_THann(vir_va, M):
    for a in vir_va.basis_upto(4):
        for key in M.basis(2):
            assert check_THann(M, {a: ONE}, {key: ONE}) == {}


def test_J_annihilates_low_degrees(vir_va, M):
    for p in range(3):
        gens = j_generators(vir_va, p, 1, 6)
        for q in range(p + 1):
            for key in M.basis(q):
                assert all(not v for _, v in j_annihilation(M, gens, {key: ONE}))


def test_J_level_zero_does_not_annihilate_degree_one(vir_va, M):
    gens = j_generators(vir_va, 0, 1, 6)
    key = M.basis(1)[0]
    assert any(v for _, v in j_annihilation(M, gens, {key: ONE}))


@pytest.mark.parametrize("m,k", [(1, -1), (2, -2), (0, -1), (1, 0)])
def test_compose_modes(vir_va, M, m, k):
    a = b = vir_va.gen("L")
    c = compose_modes(M, a, b, m, k)
    for d in range(M.depth_cutoff + 1):
        for key in M.basis(d):
            x = {key: ONE}
            try:
                lhs = M.state_mode(a, m, M.state_mode(b, k, x))
            except CutoffError:
                continue
            assert M.state_mode(c, m + k, x) == lhs


def test_cutoff_error(vir_va):
    small = InducedModule(vir_va, default_module_input(vir_va), 0, 1, max_degree=2)
    with pytest.raises(CutoffError):
        small.act("L", -3, small.vector())


def test_sl2_two_dimensional_input(sl2_va):
    N = default_module_input(sl2_va)
    N.validate(2)
    M2 = induce(sl2_va, N, 0, 1)
    assert M2.dims() == [2, 6]
    e, f = sl2_va.gen("e"), sl2_va.gen("f")
    x = M2.vector((), 1)
    # e_0 f_0 - f_0 e_0 = h_0 on the lower vector
    lhs = M2.state_mode(e, 0, M2.state_mode(f, 0, x))
    rhs = M2.state_mode(f, 0, M2.state_mode(e, 0, x))
    h = M2.state_mode(sl2_va.gen("h"), 0, x)
    diff = dict(lhs)
    for kk, v in rhs.items():
        diff[kk] = diff.get(kk, 0 * ONE) - v
    assert {kk: v for kk, v in diff.items() if v} == h


def test_zhumod_files(vir_alg):
    N = ZhuModuleInput.from_json(vir_alg, json.loads((DATA / "verma_level0.zhumod.json").read_text()))
    assert N.action["L"] == [[PolyScalar.coerce(Fraction(3, 2))]]
    # level-one data satisfying the correct quadratic relation
    N1 = ZhuModuleInput.from_json(vir_alg, json.loads((DATA / "vir_level1.zhumod.json").read_text()))
    assert N1.p == 1 and N1.dimension == 2


def test_zhumod_relation_violation(vir_alg):
    # L = 3, A = 8 satisfies A^2 = 2LA + 2A but not the relation of the level-one algebra
    data = json.loads((DATA / "vir_level1_bad.zhumod.json").read_text())
    with pytest.raises(ModuleError, match="violates"):
        ZhuModuleInput.from_json(vir_alg, data)


def test_zhumod_schema_errors(vir_alg):
    data = json.loads((DATA / "verma_level0.zhumod.json").read_text())
    data["action"]["L"] = [[1.5]]
    with pytest.raises(ModuleError, match="action/L/0/0"):
        ZhuModuleInput.from_json(vir_alg, data)
    data = json.loads((DATA / "verma_level0.zhumod.json").read_text())
    data["action"]["L"] = [["1", "2"]]
    with pytest.raises(ModuleError, match="1x1"):
        ZhuModuleInput.from_json(vir_alg, data)


def test_induction_needs_level_zero(vir_va):
    N1 = ZhuModuleInput.from_json(vir_va.alg, json.loads((DATA / "vir_level1.zhumod.json").read_text()))
    with pytest.raises(ModuleError):
        induce(vir_va, N1, 1, 2)


def test_small_module_suite(vir_va):
    recs = run_module_suite(vir_va, [0, 1], depth=2, state_weight=2, borcherds_modes=1, borcherds_ns=range(-1, 1))
    assert recs and all(r.status == "pass" for r in recs)
    assert {r.name for r in recs} >= {"borcherds", "zhu-action", "akbk", "THann", "J-annihilation", "L0-eigenvalue"}
