from fractions import Fraction

import pytest

from schreiertrees.ergodicity import CertificateError, CertificateParams, certificate, essential_freeness
from schreiertrees.gamma5 import build_H
from schreiertrees.trees import Code, FamilyError, MasterCodeFamily, master_code_geometry

SMALL = CertificateParams(expansion_size=5, expansion_window=6, sweep_size=8)


def test_certificate_small_scale():
    cert = certificate(Code("", "b"), Code("", "c"), SMALL)
    js = cert.to_json()
    assert js["verdict"].startswith("criterion satisfied")
    assert all(js["fixed_point_witness"].values())
    assert js["alpha_moves_base_of_C_prime"]
    assert js["escape_sweep"]["failures"] == []
    assert Fraction(js["expansion"]["min_ratio"]) > 1
    assert Fraction(js["expansion"]["proven_floor"]) == Fraction(6, 5)
    assert any("non-amenability criterion" in n for n in js["notes"])


def test_equal_codes():
    with pytest.raises(FamilyError):
        certificate(Code("", "b"), Code("b", "b"), SMALL)


def test_late_divergence():
    C, C2 = Code("bb", "b"), Code("bb", "c")
    cert = certificate(C, C2, SMALL)
    assert cert.H["divergence"] == 3
    assert cert.H["alpha_path"] == master_code_geometry(C, 3)[1] + "a"


def test_refusal_is_itemized():
    params = CertificateParams(expansion_size=3, expansion_window=4, freeness_min_moved=10**6)
    with pytest.raises(CertificateError) as exc:
        certificate(Code("", "b"), Code("", "c"), params)
    assert exc.value.item == "essential freeness"
    assert exc.value.detail["ok"] is False


def test_freeness_counts():
    fam = MasterCodeFamily(Code("", "c"))
    res = essential_freeness(fam, 2, 3, 1)
    assert res["ok"] and res["least_moved"] <= res["vertices"]


@pytest.mark.slow
def test_certificate_default_scale():
    cert = certificate(Code("", "b"), Code("", "c"))
    js = cert.to_json()
    assert Fraction(js["expansion"]["min_ratio"]) == 4
    assert Fraction(js["expansion"]["proven_floor"]) == Fraction(9, 8)
    assert build_H(Code("", "b"), Code("", "c")).generators == js["H"]["generators"]
