import json
import subprocess
import sys

import pytest

from qdi_adders.cli import main
from qdi_adders.netlist import import_netlist


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gen(tmp_path, capsys):
    out = tmp_path / "n.json"
    code, text, _ = run(capsys, "gen", "--arch", "bcla-red", "--width", "32", "--block-size", "4", "--out", str(out))
    assert code == 0
    assert "BCLA_RED width=32 block=4: 812 gates, area proxy 4664" in text
    first = out.read_bytes()
    import_netlist(first.decode())
    run(capsys, "gen", "--arch", "bcla-red", "--width", "32", "--out", str(out))
    assert out.read_bytes() == first


def test_gen_to_stdout(capsys):
    code, text, err = run(capsys, "gen", "--arch", "rca", "--width", "2")
    assert code == 0 and json.loads(text)["net_count"] > 0 and "RCA width=2" in err


def test_gen_divisibility(capsys):
    code, _, err = run(capsys, "gen", "--arch", "bcla", "--width", "10", "--block-size", "4")
    assert code == 2 and "divisible" in err


def test_gen_hybrid_picks_span(capsys):
    code, _, err = run(capsys, "gen", "--arch", "hybrid-red", "--width", "16", "--vectors", "20")
    assert code == 0 and "span=4" in err


def test_gen_io_error(tmp_path, capsys):
    code, _, err = run(capsys, "gen", "--arch", "rca", "--width", "2", "--out", str(tmp_path / "no" / "x.json"))
    assert code == 1


def test_unknown_arch(capsys):
    assert run(capsys, "gen", "--arch", "kogge", "--width", "4")[0] == 2


def test_sim(capsys):
    argv = ("sim", "--arch", "rca", "--width", "4", "-a", "15", "-b", "1", "--cin", "0")
    code, out, _ = run(capsys, *argv)
    assert code == 0 and "sum=0 cout=1" in out
    assert "forward_latency=" in out and "cycle_time=" in out and "transitions=" in out
    assert run(capsys, *argv)[1] == out


def test_sim_operand_range(capsys):
    assert run(capsys, "sim", "--arch", "rca", "--width", "4", "-a", "16", "-b", "0")[0] == 2


def test_sim_worst_case_matches_bench(capsys):
    _, out, _ = run(capsys, "sim", "--arch", "bcla", "--width", "16", "-a", str(2**16 - 1), "-b", "0", "--cin", "1")
    fwd = int(out.split("forward_latency=")[1].split()[0])
    _, csv, _ = run(capsys, "bench", "--arch", "bcla", "--width", "16", "--vectors", "200", "--seed", "7")
    row = csv.splitlines()[2].split(",")
    assert row[0] == "BCLA_REG" and int(row[1]) == fwd


def test_bench_default_and_determinism(tmp_path, capsys):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        code, _, _ = run(capsys, "bench", "--width", "16", "--vectors", "100", "--seed", "7", "--out", str(p))
        assert code == 0
    text = paths[0].read_text()
    assert text == paths[1].read_text()
    lines = text.splitlines()
    assert lines[1].startswith("arch,fwd_worst,fwd_mean,rev_worst")
    assert [l.split(",")[0] for l in lines[2:7]] == ["RCA", "BCLA_REG", "BCLA_RED",
                                                     "HYBRID_REG(span=4)", "HYBRID_RED(span=4)"]
    assert lines[7].startswith("# ordering HYBRID_RED <= BCLA_RED < BCLA_REG: ")


@pytest.mark.parametrize("fmt", ["md", "text", "structured-text"])
def test_bench_formats(fmt, capsys):
    code, out, _ = run(capsys, "bench", "--arch", "rca,bcla", "--width", "8", "--vectors", "20", "--format", fmt)
    assert code == 0
    if fmt == "md":
        assert out.count("| RCA |") == 1
    else:
        assert [r["arch"] for r in json.loads(out)["rows"]] == ["RCA", "BCLA_REG"]


def test_bench_delay_table(tmp_path, capsys):
    table = tmp_path / "d.txt"
    table.write_text("CELEM * 3\n")
    _, slow, _ = run(capsys, "bench", "--arch", "rca", "--width", "8", "--vectors", "20", "--delay-table", str(table))
    _, fast, _ = run(capsys, "bench", "--arch", "rca", "--width", "8", "--vectors", "20")
    assert slow != fast
    assert run(capsys, "bench", "--arch", "rca", "--delay-table", str(tmp_path / "none"))[0] == 1
    table.write_text("XOR 2 1\n")
    assert run(capsys, "bench", "--arch", "rca", "--delay-table", str(table))[0] == 2


def test_sweep(capsys):
    code, out, _ = run(capsys, "sweep", "--width", "32", "--block-size", "4", "--spans", "4,8,12",
                       "--vectors", "50", "--seed", "7")
    assert code == 0
    assert out.splitlines()[-1].startswith("# best lsb_rca_span=4 fwd_worst=")
    assert sum(1 for l in out.splitlines() if l.startswith("HYBRID_RED(span=")) == 3


def test_sweep_empty(capsys):
    code, _, err = run(capsys, "sweep", "--width", "32", "--spans", "3,5")
    assert code == 2 and "no feasible" in err


def test_bad_vectors(capsys):
    assert run(capsys, "bench", "--vectors", "0")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qdi_adders", "sim", "--arch", "bcla-red", "--width", "8",
                           "-a", "200", "-b", "100"], capture_output=True, text=True)
    assert proc.returncode == 0 and "sum=44 cout=1" in proc.stdout


def _swapped_sum(config):
    from qdi_adders.adders import build_adder
    nl = build_adder(config)
    s0 = nl.outputs[0]
    nl.outputs[0] = type(s0)(s0.name, s0.rail0, s0.rail1)
    return nl


def _bogus_pair(config):
    from qdi_adders.adders import build_adder
    from qdi_adders.netlist import BUF, DualRailPort
    nl = build_adder(config)
    a1, b1 = nl.input_port("a0").rail1, nl.input_port("b0").rail1
    nl.annotations["rail_pairs"].append(DualRailPort("bogus", nl.add_gate(BUF, [a1]), nl.add_gate(BUF, [b1])))
    return nl


def test_sim_mismatch_exit(monkeypatch, capsys):
    monkeypatch.setattr("qdi_adders.cli.build_adder", _swapped_sum)
    code, _, err = run(capsys, "sim", "--arch", "rca", "--width", "2", "-a", "1", "-b", "0")
    assert code == 4 and "expected sum=1" in err


def test_bench_mismatch_exit(monkeypatch, capsys):
    monkeypatch.setattr("qdi_adders.metrics.build_adder", _swapped_sum)
    code, _, err = run(capsys, "bench", "--arch", "rca", "--width", "4", "--vectors", "5")
    assert code == 4 and "functional mismatch: RCA: a=" in err


def test_sim_protocol_violation_exit(monkeypatch, capsys):
    monkeypatch.setattr("qdi_adders.cli.build_adder", _bogus_pair)
    code, _, err = run(capsys, "sim", "--arch", "rca", "--width", "2", "-a", "1", "-b", "1")
    assert code == 3 and "ILLEGAL_DUAL_RAIL at bogus" in err
