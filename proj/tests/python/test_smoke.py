"""Smoke tests for the python bindings."""

import math

import pytest

import mpflux


def test_element_catalog():
    counts = {"tri": 8, "quad": 10, "tet": 15, "hex": 27, "prism": 24}
    for shape, expected in counts.items():
        info = mpflux.element_info(shape, order=2)
        assert info["velocity_count"] == expected
        assert math.isclose(sum(info["weights"]), 1.0, rel_tol=1e-14)
        assert all(w > 0 for w in info["weights"])
        d = info["dim"]
        for block in info["node_blocks"]:
            assert len(block) == d

    tri = mpflux.element_info("tri", order=2)
    assert tri["points"][3] == pytest.approx([1 / 3, 1 / 3])
    assert tri["weights"][3] == pytest.approx(3 / 4)


def test_eval_velocity_and_divergence():
    # phi_8 of the triangle at the barycenter
    v = mpflux.eval_velocity("tri", 2, 7, [1 / 3, 1 / 3])
    assert v == pytest.approx([-2 / 9, 1 / 9])
    # div phi_8 = 3x - 1
    assert mpflux.eval_divergence("tri", 2, 7, [0, 0]) == pytest.approx(-1.0)
    with pytest.raises(mpflux.MpfluxError):
        mpflux.eval_velocity("tri", 2, 99, [0, 0])
    with pytest.raises(mpflux.MpfluxError):
        mpflux.element_info("tet", order=1)  # undefined combination


def test_mesh_generation_and_roundtrip():
    mesh = mpflux.generate_mesh("hybrid-square", 1)
    assert mesh.dim == 2
    assert mesh.num_cells > 0
    again = mpflux.read_mesh(mesh.write())
    assert again.num_cells == mesh.num_cells
    assert again.h == pytest.approx(mesh.h)
    with pytest.raises(mpflux.MpfluxError):
        mpflux.generate_mesh("moebius", 1)
    assert set(mpflux.generator_families()) >= {"tri-square", "hex-cube"}


def test_patch_test_run():
    result = mpflux.run_case("constant2d", "hybrid-square", 1, order=2, tol=1e-14)
    assert result["err_u"] <= 1e-10
    assert result["err_p"] <= 1e-10
    assert result["conservation_rel"] <= 1e-10


def test_study_and_csv():
    rows = mpflux.convergence_study("paper2d", "hybrid-square", 1, 2, order=2)
    assert len(rows) == 2
    assert rows[1]["err_u"] < rows[0]["err_u"]
    orders = mpflux.eoc([r["err_u"] for r in rows], [r["h"] for r in rows])
    assert 1.7 < orders[0] < 2.5

    csv = mpflux.study_csv("paper2d", "hybrid-square", 1, 2, order=2)
    lines = csv.strip().splitlines()
    assert lines[0].startswith("h,dof_u,dof_p,err_u")
    assert len(lines) == 3


def test_describe_element():
    text = mpflux.describe_element("prism", 2)
    assert "velocity basis (24 functions)" in text
