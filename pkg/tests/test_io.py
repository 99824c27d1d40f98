from __future__ import annotations

import json
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mukai_walls import io as mio
from mukai_walls.classes import Rank2Lattice
from mukai_walls.errors import DomainError, ParseError
from mukai_walls.lattice import MukaiVector, NSLattice
from mukai_walls.reduction import run_reduction
from mukai_walls.stability import StabParam
from mukai_walls.svg import HEIGHT, WIDTH, WallDiagram, render_walls_svg
from mukai_walls.wallcross import classify_wall_kind
from mukai_walls.walls import VERTICAL, Wall, certify_no_walls, enumerate_candidate_walls, hilbert_vector

F = Fraction
VALID = '{"lattice":{"gram":[[2]],"labels":["H"]},"vector":{"r":1,"delta":[0],"s":-1}}'


def problem(**extra):
    obj = json.loads(VALID)
    obj.update(extra)
    return json.dumps(obj)


class TestParseProblem:
    def test_valid(self):
        prob = mio.parse_problem(VALID.encode())
        assert prob.lattice.degree == 1
        assert prob.vector == MukaiVector(1, (0,), -1, NSLattice.rank_one(1))

    def test_odd_diagonal(self):
        with pytest.raises(ParseError, match="even lattice violated") as exc:
            mio.parse_problem('{"lattice":{"gram":[[3]]}}')
        assert exc.value.pointer.startswith("/lattice")

    def test_zero_denominator(self):
        with pytest.raises(ParseError) as exc:
            mio.parse_problem(problem(stab={"d": 1, "alpha": [1, 0], "beta": 0}))
        assert exc.value.pointer == "/stab/alpha/1"

    def test_unknown_field(self):
        with pytest.raises(ParseError, match="schema"):
            mio.parse_problem(problem(colour="red"))

    def test_schema_pointer(self):
        with pytest.raises(ParseError) as exc:
            mio.parse_problem(problem(vector={"r": "one", "delta": [0], "s": 0}))
        assert exc.value.pointer == "/vector/r"

    def test_malformed_json(self):
        with pytest.raises(ParseError, match="malformed"):
            mio.parse_problem(b"{not json")

    def test_delta_length(self):
        with pytest.raises(ParseError) as exc:
            mio.parse_problem(problem(vector={"r": 1, "delta": [0, 1], "s": 0}))
        assert exc.value.pointer == "/vector/delta"

    def test_stab_degree_mismatch(self):
        with pytest.raises(ParseError) as exc:
            mio.parse_problem(problem(stab={"d": 2, "alpha": 1, "beta": 0}))
        assert exc.value.pointer == "/stab/d"

    def test_stab_rationals(self):
        prob = mio.parse_problem(problem(stab={"d": 1, "alpha": [1, 2], "beta": -1}))
        assert prob.stab == StabParam(1, F(1, 2), -1)


class TestRoundTrip:
    @given(st.fractions())
    def test_fraction(self, q):
        assert mio.fraction_from_json(mio.fraction_to_json(q)) == q

    def test_negative_denominator_rejected(self):
        with pytest.raises(ParseError):
            mio.fraction_from_json([1, -2])

    def test_walls(self):
        for w in enumerate_candidate_walls(1, 3, bounds=(6, 60)):
            assert mio.wall_from_json(json.loads(mio.dumps(mio.wall_to_json(w)))) == w

    def test_certificate(self):
        cert = certify_no_walls(2, 2, (10, 300))
        obj = json.loads(mio.dumps(mio.certificate_to_json(cert)))
        assert obj["status"] == "Valid"
        assert mio.certificate_from_json(obj) == cert

    def test_wall_kind(self):
        kind = classify_wall_kind(Rank2Lattice(((-2, 2), (2, 0))), (2, 1))
        assert mio.wall_kind_from_json(json.loads(mio.dumps(mio.wall_kind_to_json(kind)))) == kind

    def test_spherical_trace(self):
        trace = run_reduction(NSLattice.rank_one(1), MukaiVector(1, (0,), 1, NSLattice.rank_one(1)))
        assert json.loads(mio.emit_trace_json(trace))["terminal"] == "spherical_point"

    def test_certificate_embedded(self):
        lat = NSLattice.rank_one(1)
        trace = run_reduction(lat, MukaiVector(2, (1,), -1, lat), bounds=(10, 300))
        obj = json.loads(mio.emit_trace_json(trace))
        assert obj["certificate"] == mio.certificate_to_json(trace.certificate)

    def test_generated_traces(self):
        rng = random.Random(11)
        done = 0
        while done < 100:
            lat = NSLattice.rank_one(rng.randint(1, 3))
            v = MukaiVector(rng.randint(-4, 4), (rng.randint(-4, 4),), rng.randint(-6, 6), lat)
            if not v.is_primitive or v.square < -2:
                continue
            trace = run_reduction(lat, v, bounds=(8, 200))
            text = mio.emit_trace_json(trace)
            back = mio.parse_trace_json(text)
            assert back == trace
            assert mio.emit_trace_json(back) == text
            done += 1

    def test_canonical_text(self):
        lat = NSLattice.rank_one(2)
        trace = run_reduction(lat, MukaiVector(0, (0,), 1, lat))
        text = mio.emit_trace_json(trace)
        assert text == json.dumps(json.loads(text), sort_keys=True, separators=(",", ":"))


class TestSvg:
    def test_empty(self):
        out = render_walls_svg([])
        assert out.startswith("<svg") and f'width="{WIDTH}" height="{HEIGHT}"' in out
        assert 'class="axis"' in out and 'class="wall"' not in out

    def test_semicircle_endpoints(self):
        walls = [w for w in enumerate_candidate_walls(1, 2, bounds=(3, 10)) if w.center == F(-3, 2)]
        dg = WallDiagram(walls[:1], (F(-3), F(0), F(2)))
        out = render_walls_svg(dg)
        sx = WIDTH / 3
        r = math.sqrt(5 / 4)
        left = format((-1.5 - r + 3) * sx, ".12g")
        right = format((-1.5 + r + 3) * sx, ".12g")
        assert f"M {left} {HEIGHT} A" in out and f" {right} {HEIGHT}\"" in out
        assert out.count("<path") == 1 and "<title>" in out

    def test_hilbert_chow_line(self):
        lat = NSLattice.rank_one(1)
        hc = Wall(VERTICAL, MukaiVector(0, (0,), 1, lat), hilbert_vector(1, 2), beta=0)
        out = render_walls_svg([hc])
        assert ">HC</text>" in out and 'stroke="red"' in out

    def test_deterministic(self):
        walls = enumerate_candidate_walls(1, 3, bounds=(6, 60))
        assert render_walls_svg(walls) == render_walls_svg(list(walls))

    def test_empty_viewport_rejected(self):
        with pytest.raises(DomainError):
            WallDiagram((), (F(1), F(1), F(1)))
