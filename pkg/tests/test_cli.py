import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from hornscan import cli
from hornscan import io as hio
from hornscan.config import RunConfig, format_config, parse_config

SVG = "{http://www.w3.org/2000/svg}"


@pytest.fixture(scope="module")
def design_out(tmp_path_factory):
    out = tmp_path_factory.mktemp("design")
    assert cli.main(["design", "--out", str(out), "--quiet"]) == 0
    return out


def test_design_report(design_out):
    rep = json.loads((design_out / "design_report.json").read_text())
    assert 576e-6 <= rep["profile"]["exit_width_walls_m"] <= 780e-6
    assert 79 <= rep["deflection"]["theta_ext"]["mrad"] <= 96
    assert rep["spots"]["spots_total"] == 13
    assert rep["poling"]["pass"] and rep["poling"]["ratio"] == pytest.approx(0.317, abs=5e-4)
    comp = rep["comparator"]
    assert comp["voltage_ratio"] == pytest.approx(1.9, abs=0.2)
    assert comp["rectangle"]["width_m"] == pytest.approx(460e-6, rel=0.02)
    modes = rep["deflection"]["by_mode"]
    assert min(m["mrad"] for m in modes.values()) <= 87.3 <= max(m["mrad"] for m in modes.values())


def test_profile_table_round_trip(design_out, paper_profile):
    header, data = hio.read_table(design_out / "profile.csv")
    assert tuple(header) == hio.PROFILE_HEADER
    assert data.shape == (len(paper_profile.z), 6)
    np.testing.assert_array_equal(data[:, 1], paper_profile.x)
    np.testing.assert_array_equal(data[:, 5], paper_profile.width_walls)


def test_geometry_svg(design_out):
    root = ET.parse(design_out / "geometry.svg").getroot()
    polys = root.findall(f"{SVG}polygon")
    assert len(polys) == 21
    classes = [p.get("class") for p in polys]
    assert classes[0] == "pos" and all(a != b for a, b in zip(classes, classes[1:]))
    assert root.get("preserveAspectRatio") == "none"
    assert float(root.get("data-aspect")) > 1  # axial scale compressed relative to transverse
    assert len(root.findall(f"{SVG}polyline")) == 2


def test_design_is_deterministic(design_out, tmp_path):
    assert cli.main(["design", "--out", str(tmp_path), "--quiet"]) == 0
    for name in ("design_report.json", "profile.csv", "geometry.svg"):
        assert (tmp_path / name).read_bytes() == (design_out / name).read_bytes()


def test_zero_drive_design(tmp_path):
    cfg = tmp_path / "zero.ini"
    cfg.write_text("[drive]\nvoltage = 0 V\nvoltages = 0 V\n")
    assert cli.main(["design", "--config", str(cfg), "--out", str(tmp_path / "o"), "--quiet"]) == 0
    rep = json.loads((tmp_path / "o" / "design_report.json").read_text())
    assert rep["deflection"]["theta_ext"]["rad"] == 0.0
    assert "comparator" not in rep
    _, data = hio.read_table(tmp_path / "o" / "profile.csv")
    np.testing.assert_allclose(data[:, 4], 2 * data[:, 3], rtol=0, atol=0)


def test_widening_mode_flag(tmp_path):
    assert cli.main(["design", "--out", str(tmp_path), "--widening-mode", "design", "--quiet"]) == 0
    rep = json.loads((tmp_path / "design_report.json").read_text())
    assert rep["widening_mode"] == "design"
    assert rep["deflection"]["theta_ext"]["mrad"] > 96


def test_compare_command(tmp_path):
    assert cli.main(["compare", "--out", str(tmp_path), "--quiet"]) == 0
    rep = json.loads((tmp_path / "compare_report.json").read_text())["comparison"]
    assert rep["voltage_ratio"] == pytest.approx(1.9, abs=0.2)
    assert rep["voltage_ratio"] == rep["rectangle"]["index_contrast"] / rep["horn"]["index_contrast"]


def test_simulate_command(tmp_path):
    assert cli.main(["simulate", "--out", str(tmp_path), "--quiet"]) == 0
    rep = json.loads((tmp_path / "simulate_report.json").read_text())
    assert len(rep["reports"]) == 5
    assert rep["full_drive"]["spots_total"] == 13
    assert rep["full_drive"]["voltage_V"] == 1000.0
    header, fan = hio.read_table(tmp_path / "fan.csv")
    assert tuple(header) == hio.FAN_HEADER
    extremes = fan[[0, -1], 2]
    np.testing.assert_allclose(np.abs(extremes), 87.3e-3, rtol=0.10)
    rays = ET.parse(tmp_path / "fan.svg").getroot().findall(f"{SVG}line")
    assert len(rays) == 5
    assert [float(r.get("data-theta-ext")) for r in rays] == list(fan[:, 2])
    images = sorted(tmp_path.glob("field_*.pgm"))
    assert len(images) == 5
    img = hio.read_pgm(tmp_path / "field_p1000V.pgm")
    assert img.shape[1] == 2048 and img.max() == 255


def test_simulate_single_zero(tmp_path):
    cfg = tmp_path / "c.ini"
    cfg.write_text("[drive]\nvoltages = 0 V\n[grid]\nnx = 1024\ndz = 10 um\n")
    assert cli.main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "o"), "--quiet"]) == 0
    _, fan = hio.read_table(tmp_path / "o" / "fan.csv")
    assert fan.shape[0] == 1 and abs(fan[0, 2]) < 1e-12


def test_config_error_exit_code(tmp_path):
    cfg = tmp_path / "bad.ini"
    cfg.write_text("[drive]\nvoltage = 5 kV\n")
    assert cli.main(["design", "--config", str(cfg), "--out", str(tmp_path), "--quiet"]) == 2
    assert cli.main(["design", "--config", str(tmp_path / "missing.ini"), "--quiet"]) == 2


def test_numerical_error_exit_code(tmp_path):
    # a narrow window cannot hold the horn
    cfg = tmp_path / "narrow.ini"
    cfg.write_text("[grid]\nx_span = 512 um\nnx = 512\n")
    assert cli.main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "o"), "--quiet"]) == 3


def test_defaults_command(capsys):
    assert cli.main(["defaults"]) == 0
    text = capsys.readouterr().out
    assert parse_config(text) == RunConfig()
    assert text == format_config(RunConfig())


def test_paths_confined(tmp_path):
    with pytest.raises(ValueError):
        hio.confined(tmp_path, "../escape.txt")
    assert hio.confined(tmp_path, "a.csv").parent == tmp_path.resolve()


def test_pgm_round_trip(tmp_path):
    img = np.outer(np.linspace(0, 2, 7), np.ones(5))
    p = tmp_path / "x.pgm"
    p.write_bytes(hio.pgm_bytes(img))
    back = hio.read_pgm(p)
    assert back.shape == (7, 5) and back.max() == 255 and back.min() == 0
    np.testing.assert_array_equal(back[:, 0], np.round(np.linspace(0, 1, 7) * 255))


def test_table_keeps_17_digits(tmp_path):
    vals = np.array([[1 / 3, np.pi * 1e-7, -2.0000000000000004]])
    p = tmp_path / "t.csv"
    p.write_text(hio.table_text(("a", "b", "c"), vals))
    _, back = hio.read_table(p)
    np.testing.assert_array_equal(back, vals)
