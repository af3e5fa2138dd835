import json
import math

import numpy as np
import pytest

import vortexcrystal as vc


def test_pair_is_balanced():
    c, m = vc.vortex_pair()
    rep = vc.balance_report(c, m, tol=1e-12)
    assert rep["balanced"]
    assert rep["sup_norm"] < 1e-14
    assert rep["class"]["kind"] == "translating"


def test_hermite_roots_n2():
    r = vc.hermite_roots(2)
    assert r == pytest.approx([-1 / math.sqrt(2), 1 / math.sqrt(2)], abs=1e-15)


def test_heptagon_rank_and_symmetric_rank():
    c, m = vc.thomson(7)
    full = vc.rank_report(c, m)
    assert full["rank"] == 11
    assert not full["nondegenerate"]
    assert full["jacobian"].shape == (14, 14)
    sym = vc.restricted_rank_report(c, m)
    assert sym["nondegenerate"]
    assert sym["group_order"] == 14


def test_document_round_trip():
    c, m = vc.hermite_config(5)
    text = vc.serialize_config(c, m)
    c2, m2 = vc.parse_config(text)
    assert c2.positions == c.positions
    assert c2.sigmas == c.sigmas
    assert m2.omega == m.omega
    assert json.loads(text)["geometry"]["kind"] == "finite"


def test_refine_recovers_crystal():
    c, m = vc.hermite_config(4)
    seed = c.with_positions([z + 1e-5j for z in c.positions])
    fixed, motion, rep, iters = vc.refine(seed, m)
    assert rep["balanced"]
    assert iters > 0


def test_karman_velocity():
    b = 0.3
    c, m = vc.karman_street(b)
    assert abs(m.v) == pytest.approx(math.tanh(math.pi * b) / 2, rel=1e-12)
    lim = vc.limit_periods(c, m, eps=0.5)
    assert lim["t1"] == pytest.approx([2.0, 0.0, 0.0])


def test_mesh_arrays():
    c, m = vc.thomson(3)
    mesh = vc.export_mesh(c, grid=12, turns=2, eps=0.5)
    v = np.asarray(mesh["vertices"])
    f = np.asarray(mesh["faces"])
    assert v.shape == (3 * len(f), 3)
    assert len(f) == 2 * 2 * mesh["triangles_per_sheet_turn"]


def test_errors_carry_kind():
    with pytest.raises(vc.VclError) as info:
        vc.VortexConfig([0.5, 0.5], [1, -1])
    assert info.value.args[0] == "coincident-vortices"
    with pytest.raises(ValueError):
        vc.thomson(0)
