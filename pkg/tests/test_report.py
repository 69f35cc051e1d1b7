import io
import xml.etree.ElementTree as ET

import pytest

from macfrac.errors import DomainError
from macfrac.mpnum import precision
from macfrac.report import (
    DEFAULT_INTERVALS,
    GridReport,
    ReportIOError,
    csv_header,
    mean_absolute_errors,
    read_csv,
    sweep_grid,
    write_csv,
    write_svg,
)
from macfrac.spectra import builtin_spectrum

SVG_NS = "{http://www.w3.org/2000/svg}"


@pytest.fixture(scope="module")
def geom2():
    return sweep_grid(builtin_spectrum("geom"), "0.1", "0.9", 2, 0, precision(40))


@pytest.fixture(scope="module")
def exp41():
    return sweep_grid(builtin_spectrum("exp"), "0.5", "2.5", 41, 2, precision(30))


def _stub(residuals_raw, residuals_corr, digits=30):
    from macfrac.operator import ReconstructionResult

    ctx = precision(digits)
    rows = tuple(
        ReconstructionResult(ctx.mpf(i + 1), 0, (), 0, 0, ctx.mpf(a), ctx.mpf(b), None)
        for i, (a, b) in enumerate(zip(residuals_raw, residuals_corr))
    )
    return GridReport("stub", (1, len(rows)), len(rows), None, rows, 0, 0, digits)


class TestSweep:
    def test_two_points(self, geom2):
        ctx = precision(40)
        assert [r.x for r in geom2.rows] == [ctx.mpf("0.1"), ctx.mpf("0.9")]
        expected = (abs(geom2.rows[0].residual_raw) + abs(geom2.rows[1].residual_raw)) / 2
        assert geom2.mae_raw == expected

    def test_uniform_grid(self, exp41):
        xs = [r.x for r in exp41.rows]
        assert len(xs) == exp41.npoints == 41
        step = precision(30).mpf(2) / 40
        for i, x in enumerate(xs):
            assert abs(x - (precision(30).mpf("0.5") + i * step)) <= precision(30).mpf("1e-28")

    def test_exp_improves(self, exp41):
        assert exp41.mae_corrected < exp41.mae_raw

    def test_monomial_exact(self):
        ctx = precision(30)
        rep = sweep_grid(builtin_spectrum("monomial:2"), "0.5", "2", 4, 0, ctx)
        assert rep.mae_raw <= 10 * ctx.eps and rep.mae_corrected <= 10 * ctx.eps
        assert rep.m is None

    def test_errors(self):
        ctx = precision(30)
        with pytest.raises(DomainError):
            sweep_grid(builtin_spectrum("geom"), "0.5", "1.2", 5, 0, ctx)
        with pytest.raises(DomainError):
            sweep_grid(builtin_spectrum("exp"), "2", "1", 5, 0, ctx)
        with pytest.raises(ValueError):
            sweep_grid(builtin_spectrum("exp"), "1", "2", 1, 0, ctx)

    def test_row_failure_names_x(self, monkeypatch):
        from macfrac import report
        from macfrac.errors import ConvergenceError

        def boom(s, x, m, ctx):
            raise ConvergenceError("stalled")

        monkeypatch.setattr(report, "reconstruct_point", boom)
        with pytest.raises(ConvergenceError, match="at x = 1"):
            sweep_grid(builtin_spectrum("exp"), "1", "2", 3, 0, precision(30))

    def test_default_intervals_inside_domains(self):
        for name, (a, b) in DEFAULT_INTERVALS.items():
            s = builtin_spectrum(name)
            from macfrac.spectra import domain_check

            assert domain_check(s, a) and domain_check(s, b)


class TestMAE:
    def test_examples(self):
        ctx = precision(30)
        raw, _ = mean_absolute_errors(_stub(["0.1", "0.3"], [0, 0]))
        assert abs(raw - ctx.mpf("0.2")) <= ctx.eps
        assert mean_absolute_errors(_stub([0, 0], [0, 0])) == (0, 0)
        _, corr = mean_absolute_errors(_stub([0, 0], ["-1e-3", "3e-3"]))
        assert abs(corr - ctx.mpf("2e-3")) <= ctx.eps

    def test_empty(self):
        with pytest.raises(ValueError):
            mean_absolute_errors(GridReport("x", (1, 2), 0, 0, (), 0, 0, 30))


class TestCSV:
    def test_geom_layout(self, geom2):
        buf = io.StringIO()
        write_csv(geom2, buf)
        lines = buf.getvalue().split("\n")
        assert lines[-1] == ""
        lines = lines[:-1]
        assert len(lines) == 4
        assert lines[0] == "x,f_true,transform,e0,corrected,resid_raw,resid_corrected"
        assert lines[-1].startswith("# mae_raw=") and ",mae_corrected=" in lines[-1]

    def test_monomial_header(self):
        rep = sweep_grid(builtin_spectrum("monomial:3"), "1", "2", 3, 2, precision(30))
        buf = io.StringIO()
        write_csv(rep, buf)
        assert buf.getvalue().split("\n")[0] == "x,f_true,transform,corrected,resid_raw,resid_corrected"
        assert csv_header(0) == ["x", "f_true", "transform", "corrected", "resid_raw", "resid_corrected"]

    def test_round_trip(self, exp41, tmp_path):
        path = tmp_path / "exp.csv"
        write_csv(exp41, path)
        raw = path.read_bytes()
        assert b"\r" not in raw
        parsed = read_csv(path)
        assert parsed["header"] == csv_header(3)
        ctx = precision(40)
        for row, rec in zip(exp41.rows, parsed["rows"]):
            values = [row.x, row.truth, row.transform, *row.corrections,
                      row.corrected, row.residual_raw, row.residual_corrected]
            for v, p in zip(values, rec):
                v = ctx.mpf(v)
                assert abs(p - v) <= ctx.mpf("1e-29") * max(abs(v), ctx.mpf("1e-300"))

    def test_mae_comment_matches_rows(self, exp41, tmp_path):
        path = tmp_path / "exp.csv"
        write_csv(exp41, path)
        parsed = read_csv(path)
        n = len(parsed["rows"])
        raw = sum(abs(r[-2]) for r in parsed["rows"]) / n
        corr = sum(abs(r[-1]) for r in parsed["rows"]) / n
        assert abs(raw - parsed["mae_raw"]) <= precision(40).mpf("1e-20")
        assert abs(corr - parsed["mae_corrected"]) <= precision(40).mpf("1e-20")

    def test_deterministic(self, tmp_path):
        def run(path):
            rep = sweep_grid(builtin_spectrum("sin"), "0.5", "3", 5, 2, precision(30))
            write_csv(rep, path)
            return path.read_bytes()

        assert run(tmp_path / "a.csv") == run(tmp_path / "b.csv")

    def test_digits_option(self, geom2):
        buf = io.StringIO()
        write_csv(geom2, buf, digits=8)
        assert buf.getvalue().split("\n")[1].split(",")[2] == "0.43429448"

    def test_io_error(self, geom2, tmp_path):
        with pytest.raises(ReportIOError, match="missing"):
            write_csv(geom2, tmp_path / "missing" / "out.csv")


class TestSVG:
    def _parse(self, rep):
        buf = io.StringIO()
        write_svg(rep, buf)
        return ET.fromstring(buf.getvalue().encode("utf-8"))

    def test_well_formed_and_panels(self, exp41):
        root = self._parse(exp41)
        assert root.tag == SVG_NS + "svg" and root.get("version") == "1.1"
        groups = {g.get("id"): g for g in root.iter(SVG_NS + "g")}
        assert len(groups["reconstruction"].findall(SVG_NS + "polyline")) == 3
        assert len(groups["residuals"].findall(SVG_NS + "polyline")) == 2
        text = "".join(t.text or "" for t in root.iter(SVG_NS + "text"))
        assert "mae_raw=" in text and "mae_corrected=" in text

    def test_no_external_references(self, exp41):
        buf = io.StringIO()
        write_svg(exp41, buf)
        doc = buf.getvalue()
        assert "href" not in doc and "url(" not in doc and "<image" not in doc

    def test_zero_residuals(self):
        rep = sweep_grid(builtin_spectrum("monomial:2"), "0.5", "2", 4, 0, precision(30))
        root = self._parse(rep)
        res = [g for g in root.iter(SVG_NS + "g") if g.get("id") == "residuals"][0]
        for line in res.findall(SVG_NS + "polyline"):
            ys = {p.split(",")[1] for p in line.get("points").split()}
            assert len(ys) == 1  # every point sits on the 10^-digits floor

    def test_too_few_points(self):
        with pytest.raises(ValueError):
            write_svg(_stub(["0.1"], ["0.1"]), io.StringIO())
