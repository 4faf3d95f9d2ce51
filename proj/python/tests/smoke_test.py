"""End-to-end smoke of the python bindings; run with the extension on sys.path."""

import math
import sys
import tempfile

try:
    import everse as ev
except ImportError:
    import _everse as ev


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol * (1.0 + abs(a) + abs(b))


def main():
    # anchor point of the flat member and its implicit equation
    flat = ev.SurfaceParams.halfway(2)
    x, y, z = ev.family_point(flat, 0.0, 0.0)
    assert close(x, 0.0) and close(y, 1.0) and close(z, 0.0), (x, y, z)

    pt = ev.family_point(flat, 0.7, 1.1)
    assert ev.sextic_residual_halfway(pt)["relative"] < 1e-10

    boy = ev.SurfaceParams.halfway(3)
    assert ev.boy_quintic_residual(ev.family_point(boy, -0.4, 2.0))["relative"] < 1e-10

    moved = ev.SurfaceParams.coupled(2, 0.5, 1.0 / 3.0)
    assert close(moved.p, 1.0 - 0.5 / 3.0)
    assert ev.sextic_residual_t(ev.family_point(moved, 0.3, 0.8), 0.5, 1.0 / 3.0)[
        "relative"
    ] < 1e-10

    # immersion margin and the chart pipeline
    closed = ev.StageParams.closed_wormhole(1.5)
    assert close(ev.smoothness_margin(closed.shape)["margin"], 1.0)
    assert closed.check() == ""
    px, py, pz = ev.closed_point(closed, 0.3, -0.9)
    assert all(math.isfinite(v) for v in (px, py, pz))

    sphere = ev.StageParams.round_sphere(1.5)
    r = 1.5 ** -0.5
    for theta, phi in [(0.0, 0.0), (0.7, 2.0), (-1.2, -2.5)]:
        vx, vy, vz = ev.closed_point(sphere, theta, phi)
        assert close(math.sqrt(vx * vx + vy * vy + vz * vz), r, 1e-10)

    # events
    tps = ev.triple_points(0.4)
    assert len(tps) == 4
    assert close(tps[0]["s"], -0.52, 1e-9)
    assert len(tps[0]["h_roots"]) == 3

    sched = ev.default_schedule()
    assert ev.validate_schedule(sched) == ""
    assert sched.frame_count() == 541
    timeline = ev.event_timeline(sched)
    assert [r["kind"] for r in timeline] == [
        "D01", "D0", "T+", "T+", "Q", "D1", "D1", "D1", "D1", "T-", "T-", "D2", "D21",
    ]
    assert len(timeline[4]["preimages"]) == 4

    # double curves agree with their two preimages
    branches = ev.self_intersection_branches(flat, samples=32)
    assert {b["kind"] for b in branches} == {"quadrifolium", "axis-line"}
    for b in branches:
        for s in b["samples"]:
            a = ev.family_point(flat, s["h_plus"] + s["h_minus"], s["phi_plus"] + s["phi_minus"])
            c = ev.family_point(flat, s["h_plus"] - s["h_minus"], s["phi_plus"] - s["phi_minus"])
            assert max(abs(u - v) for u, v in zip(a, c)) < 1e-8

    assert ev.preimage_count(flat, (0.0, 0.0, 0.0)) == 4
    assert ev.monotonicity_witness(0.5)["pass"]

    # meshing and export
    mesh = ev.tessellate(sphere, rows=16, cols=20)
    assert len(mesh.vertices) == 15 * 20 + 2
    assert len(mesh.triangles) == 2 * 15 * 20
    assert mesh.closed
    vol = ev.signed_volume(mesh)
    assert 0.9 * 4 / 3 * math.pi * r**3 < vol < 4 / 3 * math.pi * r**3

    obj = ev.to_obj(mesh)
    assert obj.startswith("v ") and "\nf " in obj
    assert ev.fnv1a64(obj.encode()) == ev.fnv1a64(ev.to_obj(mesh).encode())
    ply = ev.to_ply(mesh)
    assert ply.startswith(b"ply\nformat binary_little_endian 1.0\n")

    flat_stage = ev.StageParams()
    flat_stage.shape = ev.SurfaceParams(2, 1.0, 0.0, 0.0)
    try:
        ev.tessellate(flat_stage, rows=8, cols=12)
        raise AssertionError("expected a refusal")
    except ev.MeshRefusal:
        pass

    # a tiny frame run is deterministic
    small = ev.parse_schedule("default")
    small.frames_per_leg = 2
    small.sweep_frames = 3
    with tempfile.TemporaryDirectory() as d1, tempfile.TemporaryDirectory() as d2:
        rep1 = ev.frame_sequence(small, d1, rows=8, cols=12, jump_limit=2.0)
        rep2 = ev.frame_sequence(small, d2, rows=8, cols=12, jump_limit=2.0)
        assert rep1["ok"] and rep2["ok"], (rep1["error"], rep2["error"])
        assert rep1["frames_written"] == 15
        assert rep1["hashes"] == rep2["hashes"]

    print("smoke ok")


if __name__ == "__main__":
    sys.exit(main())
