"""Text formats, JSON export, and the command line front end."""

import contextlib
import io
import json
import pathlib
import sys

import jsonschema
import pytest

from multisect.cli import main
from multisect.io import load_stream, save_partition, save_stream, save_triangulation
from multisect.partition import scheme_partition
from multisect.subdivide import barycentric
from multisect.triangulation import TriangulationError
from multisect.zoo import cross_projective, cross_sphere, double_simplex

SCHEMA = json.loads(
    (pathlib.Path(__file__).parent.parent / "docs" / "cellcomplex.schema.json").read_text()
)


def run(argv, stdin_text=None):
    out, err = io.StringIO(), io.StringIO()
    old = sys.stdin
    if stdin_text is not None:
        sys.stdin = io.StringIO(stdin_text)
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            code = main(list(argv))
    except SystemExit as e:  # argparse usage errors
        code = e.code
    finally:
        sys.stdin = old
    return code, out.getvalue(), err.getvalue()


# --- text formats -----------------------------------------------------------


def test_gluing_layout_round_trip():
    for T in (double_simplex(4), cross_projective(3)):
        text = save_triangulation(T, layout="gluing")
        back, P = load_stream(text)
        assert P is None
        assert back.gluings == T.gluings
        assert save_triangulation(back, layout="gluing") == text


def test_vertex_layout_round_trip():
    T = cross_sphere(3)
    text = save_triangulation(T, layout="vertex")
    back, _ = load_stream(text)
    assert back.vertex_ids == T.vertex_ids
    assert back.isomorphic_to(T)
    assert save_triangulation(back, layout="vertex") == text


def test_auto_layout_prefers_vertex_ids():
    T = cross_sphere(2)
    assert save_triangulation(T).startswith("dim 2\nvertexfacets 8\n")
    assert save_triangulation(double_simplex(2)).startswith("dim 2\nfacets 2\n")


def test_vertex_layout_needs_vertex_ids():
    with pytest.raises(TriangulationError):
        save_triangulation(double_simplex(2), layout="vertex")


def test_partition_round_trip_class_keys():
    T = cross_projective(3)
    P = scheme_partition(T, "pairs", blocks=((0, 1), (2, 3)))
    text = save_stream(T, P)
    back_T, back_P = load_stream(text)
    assert back_P is not None
    assert back_P.k == P.k
    assert back_P.labels == P.labels
    assert save_stream(back_T, back_P) == text


def test_partition_round_trip_plain_ids():
    T = cross_sphere(3)
    P = scheme_partition(T, "pairs", blocks=((0, 1), (2, 3)))
    text = save_stream(T, P, layout="vertex")
    assert "\nv 0 " in text or "\nv 1 " in text
    _, back_P = load_stream(text)
    assert back_P is not None
    assert back_P.labels == P.labels


def test_comments_and_blank_lines_ignored():
    T = double_simplex(3)
    lines = save_triangulation(T).splitlines()
    noisy = "# leading note\n\n" + "\n# interlude\n".join(lines) + "\n"
    back, _ = load_stream(noisy)
    assert back.gluings == T.gluings


def test_malformed_documents_rejected():
    good = save_triangulation(double_simplex(3))
    cases = [
        "dim x\nfacets 2\n",
        good[: good.rfind("\n", 0, len(good) - 1)],          # truncated row
        good + "0 1 0 1 2 3\n",                              # trailing tokens
        good.replace("facets 2", "facets 3", 1),
        good.replace("0 1 0 1 2 3", "0 1 0 1 2 9", 1),       # bad corner
        good.replace("0 1 0 1 2 3", "0 1 0 1 2 2", 1),       # not a bijection
    ]
    for text in cases:
        with pytest.raises(TriangulationError):
            load_stream(text)


def test_partition_label_errors_rejected():
    T = cross_projective(3)
    P = scheme_partition(T, "pairs", blocks=((0, 1), (2, 3)))
    text = save_stream(T, P)
    with pytest.raises(TriangulationError):
        load_stream(text.replace("v 0:0 0", "v 0:0 9", 1))
    first = "v 0:0 0"
    # restating the same label is tolerated; a conflict is not
    load_stream(text + first + "\n")
    with pytest.raises(TriangulationError):
        load_stream(text + "v 0:0 1\n")
    with pytest.raises(TriangulationError):
        load_stream(text.replace(first + "\n", "", 1))  # missing class


def test_save_is_deterministic():
    T, _ = barycentric(double_simplex(3))
    assert save_triangulation(T) == save_triangulation(T)


# --- command line -----------------------------------------------------------


def test_cli_header_and_version():
    code, out, _ = run(["gen", "--double-simplex", "3"])
    assert code == 0
    assert out.startswith("# multisect 0.1.0\n")
    code, out, _ = run(["--version"])
    assert code == 0


def test_cli_gen_info_round():
    code, out, _ = run(["gen", "--cross-sphere", "3"])
    assert code == 0
    code, info, _ = run(["info"], stdin_text=out)
    assert code == 0
    assert "faces 8,24,32,16" in info
    assert "euler 0" in info


def test_cli_gen_rejects_mixed_families():
    code, _, err = run(["gen", "--double-simplex", "3", "--cross-sphere", "2"])
    assert code == 2
    code, _, err = run(["gen"])
    assert code == 2


def test_cli_gen_vertex_layout_guard():
    code, out, err = run(["gen", "--double-simplex", "3", "--format", "vertex"])
    assert code == 2
    assert "gluing layout" in err


def test_cli_five_sphere_pipeline():
    code, doc, _ = run(["gen", "--double-simplex", "5"])
    assert code == 0
    code, part, _ = run(
        ["partition", "--scheme", "pairs", "--blocks", "0,1/2,3/4,5"], stdin_text=doc
    )
    assert code == 0
    code, rep, _ = run(["report"], stdin_text=part)
    assert code == 0
    assert "genera 0,0,0" in rep
    assert "supports_multisection true" in rep
    code, rep2, _ = run(["report", "--expect-multisection"], stdin_text=part)
    assert code == 0
    assert rep2 == rep


def test_cli_projective_npc_pipeline():
    code, doc, _ = run(["gen", "--cross-projective", "3"])
    code, part, _ = run(
        ["partition", "--scheme", "pairs", "--blocks", "0,1/2,3"], stdin_text=doc
    )
    assert code == 0
    code, out, _ = run(["npc-check"], stdin_text=part)
    assert code == 0
    assert "links 8" in out
    assert "degrees 4" in out
    assert "npc ok true" in out


def test_cli_small_even_npc_pipeline_fails_honestly():
    code, doc, _ = run(["gen", "--double-simplex", "2"])
    code, sd1, _ = run(["subdivide", "--barycentric"], stdin_text=doc)
    code, sd2, _ = run(["subdivide", "--barycentric"], stdin_text=sd1)
    assert code == 0
    code, part, _ = run(["partition", "--scheme", "even-npc"], stdin_text=sd2)
    assert code == 0
    code, rep, _ = run(["report", "--expect-multisection"], stdin_text=part)
    assert code == 1
    assert "supports_multisection false" in rep
    assert "diagnostic class graph 1 disconnected" in rep


def test_cli_subdivide_times():
    code, doc, _ = run(["gen", "--double-simplex", "3"])
    code, sd, _ = run(["subdivide", "--barycentric", "--times", "2"], stdin_text=doc)
    assert code == 0
    code, info, _ = run(["info"], stdin_text=sd)
    assert "facets 1152" in info


def test_cli_subdivide_requires_mode():
    code, doc, _ = run(["gen", "--double-simplex", "3"])
    code, _, err = run(["subdivide"], stdin_text=doc)
    assert code == 2


def test_cli_pachner_pass():
    code, doc, _ = run(["gen", "--double-simplex", "4"])
    code, sd, _ = run(["subdivide", "--barycentric"], stdin_text=doc)
    code, part, _ = run(["partition", "--scheme", "even-bary"], stdin_text=sd)
    assert code == 0
    code, moved, _ = run(["pachner-pass"], stdin_text=part)
    assert code == 0
    code, info, _ = run(["info"], stdin_text=moved)
    assert "facets 480" in info


def test_cli_stellar_and_join():
    code, doc, _ = run(["gen", "--cross-sphere", "2", "--format", "vertex"])
    code, out, _ = run(["stellar", "--facet", "0"], stdin_text=doc)
    assert code == 0
    code, info, _ = run(["info"], stdin_text=out)
    assert "facets 10" in info

    code, a, _ = run(["gen", "--cross-sphere", "1", "--format", "vertex"])
    import tempfile, os

    with tempfile.TemporaryDirectory() as d:
        pa = os.path.join(d, "a.txt")
        with open(pa, "w") as fh:
            fh.write(a)
        code, j, _ = run(["join", pa, pa])
        assert code == 0
        code, info, _ = run(["info"], stdin_text=j)
        assert "facets 16" in info


def test_cli_verify_and_exit_codes():
    code, doc, _ = run(["gen", "--cross-projective", "3"])
    code, part, _ = run(
        ["partition", "--scheme", "pairs", "--blocks", "0,1/2,3"], stdin_text=doc
    )
    code, out, _ = run(["verify"], stdin_text=part)
    assert code == 0
    assert "profile ok true" in out
    assert "class graph 0 vertices 2 edges 2 connected true genus 1" in out

    # without a partition section the command cannot verify anything
    code, _, err = run(["verify"], stdin_text=doc)
    assert code == 2


def test_cli_build_and_collapse():
    code, doc, _ = run(["gen", "--cross-projective", "3"])
    code, part, _ = run(
        ["partition", "--scheme", "pairs", "--blocks", "0,1/2,3"], stdin_text=doc
    )
    code, out, _ = run(["build", "--subset", "0,1"], stdin_text=part)
    assert code == 0
    assert "cells 8,16,8" in out
    assert "euler 0" in out
    code, out, _ = run(["collapse", "--subset", "0"], stdin_text=part)
    assert code == 0
    assert "spine-dim 1" in out
    assert "pairs-removed 0" in out


def test_cli_report_out_json(tmp_path):
    code, doc, _ = run(["gen", "--cross-projective", "3"])
    code, part, _ = run(
        ["partition", "--scheme", "pairs", "--blocks", "0,1/2,3"], stdin_text=doc
    )
    out_path = tmp_path / "rep.json"
    code, _, _ = run(["report", "--out", str(out_path)], stdin_text=part)
    assert code == 0
    doc = json.loads(out_path.read_text())
    assert doc["format"] == 1
    assert doc["genera"] == [1, 1]
    assert doc["supports_multisection"] is True
    assert doc["n"] == 3 and doc["k"] == 1


def test_cli_export_json_schema(tmp_path):
    code, doc, _ = run(["gen", "--cross-projective", "3"])
    code, part, _ = run(
        ["partition", "--scheme", "pairs", "--blocks", "0,1/2,3"], stdin_text=doc
    )
    out_path = tmp_path / "central.json"
    code, out, _ = run(["export", "--json", str(out_path), "--subset", "0,1"], stdin_text=part)
    assert code == 0
    payload = json.loads(out_path.read_text())
    jsonschema.validate(payload, SCHEMA)
    assert payload["counts"] == [8, 16, 8]
    assert payload["betti"] == [1, 2, 1]


def test_cli_cover_modes():
    code, doc, _ = run(["gen", "--cross-projective", "4"])
    code, out, _ = run(["cover", "--orientation"], stdin_text=doc)
    assert code == 0
    code, info, _ = run(["info"], stdin_text=out)
    assert "facets 32" in info
    assert "orientable true" in info

    code, out, _ = run(["cover", "--labeling"], stdin_text=doc)
    assert code == 0
    assert "# labeling cover, degree 1" in out

    code, _, _ = run(["cover"], stdin_text=doc)
    assert code == 2


def test_cli_symrep():
    fixture = (pathlib.Path(__file__).parent / "fixtures" / "twisted_chain.txt").read_text()
    code, out, _ = run(["symrep"], stdin_text=fixture)
    assert code == 0
    assert "trivial false" in out
    assert "generators 1" in out
    assert "orbits 1,1,2" in out

    code, doc, _ = run(["gen", "--cross-sphere", "3"])
    code, out, _ = run(["symrep"], stdin_text=doc)
    assert code == 0
    assert "trivial true" in out


def test_cli_npc_check_failure_exit():
    code, doc, _ = run(["gen", "--double-simplex", "4"])
    code, part, _ = run(
        ["partition", "--scheme", "pairs", "--blocks", "0,1/2,3/4"], stdin_text=doc
    )
    code, out, _ = run(["npc-check"], stdin_text=part)
    assert code == 1
    assert "npc ok false" in out


def test_cli_ceiling_env(monkeypatch):
    code, doc, _ = run(["gen", "--double-simplex", "3"])
    monkeypatch.setenv("MULTISECT_CEILING", "10")
    code, _, err = run(["subdivide", "--barycentric"], stdin_text=doc)
    assert code == 2
    assert "ceiling" in err


def test_cli_bad_stream_is_usage_error():
    code, _, err = run(["info"], stdin_text="dim 3\nfacets nope\n")
    assert code == 2
    assert err.startswith("multisect:")


def test_cli_byte_determinism():
    first = run(["gen", "--cross-sphere", "3"])
    second = run(["gen", "--cross-sphere", "3"])
    assert first == second
    _, doc, _ = first
    a = run(["partition", "--scheme", "pairs", "--blocks", "0,1/2,3"], stdin_text=doc)
    b = run(["partition", "--scheme", "pairs", "--blocks", "0,1/2,3"], stdin_text=doc)
    assert a == b


def test_console_script_wiring():
    import subprocess

    proc = subprocess.run(
        [sys.executable, "-m", "multisect.cli", "--version"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "0.1.0" in proc.stdout
