import xml.etree.ElementTree as ET

from gapbench.svgplot import Chart


def test_render_is_well_formed(tmp_path):
    chart = Chart("scaling", "n", "1/delta", logx=True, logy=True)
    chart.add([16, 32, 64], [100, 210, 400], "data <raw>", "points")
    chart.add([16, 64], [100, 400], "fit", "line")
    path = tmp_path / "c.svg"
    chart.save(path, "provenance -- test")
    root = ET.parse(path).getroot()
    assert root.tag.endswith("svg")
    text = path.read_text()
    assert "data &lt;raw&gt;" in text
    assert "<polyline" in text and "<circle" in text


def test_degenerate_ranges():
    chart = Chart("flat", "s", "gap")
    chart.add([0.0, 0.5, 1.0], [1.0, 1.0, 1.0])
    ET.fromstring(chart.render())
    ET.fromstring(Chart("empty").render())
