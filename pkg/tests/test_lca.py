from __future__ import annotations

import json
from fractions import Fraction

import pytest

from zhukit.lca import (LcaElement, LcaError, LcaSpec, check_axioms, current_sl2, lambda_bracket, load_lca,
                        preset, render_lambda_poly, validate_lca_json, virasoro)


def test_virasoro_bracket():
    spec = virasoro()
    L = LcaElement.gen("L")
    poly = lambda_bracket(spec, L, L)
    assert poly[0] == LcaElement.gen("L", 1, tpow=1)
    assert poly[1] == LcaElement.gen("L", 2)
    assert poly[3] == LcaElement.cent("C", Fraction(1, 12))
    assert 2 not in poly


def test_sesquilinearity_of_T():
    spec = virasoro()
    L = LcaElement.gen("L")
    lhs = lambda_bracket(spec, L.T(), L)
    base = lambda_bracket(spec, L, L)
    assert lhs == {j + 1: v.scale(-1) for j, v in base.items()}


def test_sl2_bracket():
    spec = current_sl2()
    poly = lambda_bracket(spec, LcaElement.gen("e"), LcaElement.gen("f"))
    assert poly[0] == LcaElement.gen("h") and poly[1] == LcaElement.cent("K")


@pytest.mark.parametrize("name", ["vir", "sl2"])
def test_presets_satisfy_axioms(name):
    rep = check_axioms(preset(name))
    assert rep.ok, rep.to_json()
    assert set(rep.checked) == {"sesquilinearity", "skew", "jacobi"}


def test_central_rescaling_is_still_lie_conformal():
    spec = virasoro().replace_entry("L", "L", 3, LcaElement.cent("C", Fraction(1, 3)))
    assert check_axioms(spec).ok


def test_wrong_coefficient_breaks_skew_and_jacobi():
    spec = virasoro().replace_entry("L", "L", 1, LcaElement.gen("L", 3))
    rep = check_axioms(spec)
    assert not rep.ok
    assert {f.axiom for f in rep.failures} >= {"skew"}


def test_weight_check_rejects_inhomogeneous_entry():
    spec = virasoro()
    with pytest.raises(LcaError, match="weight"):
        LcaSpec(spec.name, spec.generators, spec.centrals,
                {**spec.table, ("L", "L", 2): LcaElement.cent("C")}).check_weights()


@pytest.mark.parametrize("name", ["vir", "sl2"])
def test_json_roundtrip(name):
    spec = preset(name)
    data = spec.to_json()
    validate_lca_json(data)
    again = LcaSpec.from_json(json.loads(json.dumps(data)))
    assert again.to_json() == data


def test_schema_error_names_the_field():
    data = virasoro().to_json()
    data["generators"][0]["weight"] = 2
    with pytest.raises(LcaError, match="generators/0/weight"):
        LcaSpec.from_json(data)


def test_bad_json_reports_line(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "format": "lca/1",\n  "name": x\n}')
    with pytest.raises(LcaError, match="line 3"):
        load_lca(str(p))


def test_file_roundtrip(tmp_path):
    p = tmp_path / "sl2.json"
    p.write_text(json.dumps(current_sl2().to_json()))
    assert load_lca(str(p)).to_json() == current_sl2().to_json()


def test_render_lambda_poly():
    spec = virasoro()
    L = LcaElement.gen("L")
    text = render_lambda_poly(lambda_bracket(spec, L, L))
    assert text == "lam^3 (1/12 C) + lam (2 L) + (T L)"
