import pytest

from qdi_adders.delays import UNIT_DELAY, DelayModel
from qdi_adders.netlist import AND, CELEM, OR


def test_unit_default():
    assert UNIT_DELAY.delay(AND(2)) == 1 and UNIT_DELAY.delay(CELEM(2)) == 1


def test_parse_exact_beats_wildcard():
    m = DelayModel.parse("""
        # heavier C-elements
        CELEM * 3
        AND 5 2   # wide AND
        and 2 1
    """)
    assert m.delay(CELEM(2)) == 3
    assert m.delay(AND(5)) == 2
    assert m.delay(AND(3)) == 1
    assert m.delay(OR(4)) == 1


@pytest.mark.parametrize("text", ["NAND 2 1", "AND 2", "AND 2 -1", "AND x 1"])
def test_parse_errors(text):
    with pytest.raises(ValueError):
        DelayModel.parse(text)


def test_load(tmp_path):
    p = tmp_path / "d.txt"
    p.write_text("OR * 2\n")
    assert DelayModel.load(p).delay(OR(3)) == 2
