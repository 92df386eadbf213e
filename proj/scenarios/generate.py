#!/usr/bin/env python3
"""Writes the bundled scenario files. Run from anywhere; output goes next to this script."""
import json
import math
import pathlib

HERE = pathlib.Path(__file__).resolve().parent

FOOT = {"cop_min": [-0.05, -0.03], "cop_max": [0.05, 0.03]}


def rect(x0, x1, y0, y1, z=0.0, mu=0.7):
    return {"corners": [[x0, y0, z], [x1, y0, z], [x1, y1, z], [x0, y1, z]], "friction": mu}


def write(name, doc):
    path = HERE / f"{name}.json"
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def biped(mass=30.0, reach=1.0):
    return {"mass": mass,
            "endeffectors": [dict(id="lf", max_reach=reach, **FOOT), dict(id="rf", max_reach=reach, **FOOT)]}


def gait(footholds, ds, ss, first_ds=None, last_ds=None):
    """Alternating biped gait. footholds: list of (foot, position, surface) landing events after the
    initial stance; the first two entries are the initial left and right stances."""
    first_ds = ds if first_ds is None else first_ds
    last_ds = ds if last_ds is None else last_ds
    stance = {0: footholds[0], 1: footholds[1]}
    start = {0: 1, 1: 1}
    phases = []
    t = first_ds  # last step of the current double support
    for foot, pos, surf in footholds[2:]:
        f0, p0, s0 = stance[foot]
        phases.append((foot, start[foot], t, p0, s0))
        start[foot] = t + ss + 1
        stance[foot] = (foot, pos, surf)
        t += ss + ds
    t += last_ds - ds
    for foot in (0, 1):
        _, p, s = stance[foot]
        phases.append((foot, start[foot], t, p, s))
    out = [{"endeffector": "lf" if f == 0 else "rf", "steps": [a, b], "position": list(p),
            **({"surface": s} if s is not None else {})} for f, a, b, p, s in phases]
    out.sort(key=lambda ph: (ph["steps"][0], ph["endeffector"]))
    return out, t


def static_stand():
    feet = [("lf", 0.25, 0.15), ("rf", 0.25, -0.15), ("lh", -0.25, 0.15), ("rh", -0.25, -0.15)]
    N = 20
    write("static_stand", {
        "name": "static_stand",
        "description": "Quadruped holding still on flat ground with all four feet in contact.",
        "robot": {"mass": 20.0,
                  "initial_state": {"com": [0.0, 0.0, 0.45]},
                  "endeffectors": [dict(id=i, max_reach=0.8, **FOOT) for i, _, _ in feet]},
        "terrain": {"surfaces": [rect(-1, 1, -1, 1)]},
        "schedule": {"horizon": N, "dt": 0.1,
                     "phases": [{"endeffector": i, "steps": [1, N], "surface": 0, "position": [x, y, 0.0]}
                                for i, x, y in feet]},
        "settings": {"mode": "momentum"},
    })


def flat_walk():
    stride = 0.2
    holds = [(0, (0.0, 0.1, 0.0), 0), (1, (0.0, -0.1, 0.0), 0)]
    xl = xr = 0.0
    for k in range(10):
        last = k == 9
        if k % 2 == 0:
            xl = xr if last else round(xr + stride, 9)
            holds.append((0, (xl, 0.1, 0.0), 0))
        else:
            xr = xl if last else round(xl + stride, 9)
            holds.append((1, (xr, -0.1, 0.0), 0))
    phases, N = gait(holds, ds=2, ss=4)
    write("flat_walk", {
        "name": "flat_walk",
        "description": "Biped taking ten steps of 0.2 m on flat ground, closing with the feet side by side.",
        "robot": dict(biped(), initial_state={"com": [0.0, 0.0, 0.8]}),
        "terrain": {"surfaces": [rect(-1, 5, -1, 1)]},
        "schedule": {"horizon": N, "dt": 0.1, "dt_min": 0.05, "dt_max": 0.2, "phases": phases},
        "references": {"com_target": [(xl + xr) / 2, 0.0, 0.8]},
        "settings": {"mode": "momentum"},
    })


def tilted_rect(x0, x1, y0, y1, z_mid, roll, mu):
    """Rectangle whose height rises along y with slope tan(roll) through z_mid at its centre."""
    ym = 0.5 * (y0 + y1)
    z = lambda y: round(z_mid + math.tan(roll) * (y - ym), 9)
    return {"corners": [[x0, y0, z(y0)], [x1, y0, z(y0)], [x1, y1, z(y1)], [x0, y1, z(y1)]], "friction": mu}, z


def tilted_stairs(mu, name, roll, ss=6, ds=3):
    """Stairs whose treads are all rolled the same way: on them the contact forces cannot point
    straight up once roll exceeds the friction angle, so the CoM drifts for as long as it stays there."""
    rise, run = 0.1, 0.3
    treads, zs = [], []
    for k in range(3):
        x0 = 0.15 + k * run
        tread, z = tilted_rect(x0, x0 + run - 0.02, -0.4, 0.4, rise * (k + 1), roll, mu)
        treads.append(tread)
        zs.append(z)
    top_x = 0.15 + 3 * run
    foot = lambda k, x, y: (x, y, zs[k](y))
    holds = [(0, (0.0, 0.1, 0.0), 0), (1, (0.0, -0.1, 0.0), 0),
             (0, foot(0, 0.3, 0.1), 1),
             (1, foot(1, 0.6, -0.1), 2),
             (0, foot(2, 0.9, 0.1), 3),
             (1, foot(2, 0.9, -0.1), 3),
             (0, (top_x + 0.2, 0.1, 4 * rise), 4),
             (1, (top_x + 0.2, -0.1, 4 * rise), 4)]
    phases, N = gait(holds, ds=ds, ss=ss)
    write(name, {
        "name": name,
        "description": f"Biped climbing three treads rolled by {round(math.degrees(roll))} degrees onto a platform, "
                       f"friction {mu} everywhere.",
        "robot": dict(biped(reach=0.95), initial_state={"com": [0.0, 0.0, 0.8]}),
        "terrain": {"surfaces": [rect(-0.6, 0.14, -0.5, 0.5, 0.0, mu)] + treads +
                                [rect(top_x, top_x + 0.8, -0.5, 0.5, 4 * rise, mu)]},
        "schedule": {"horizon": N, "dt": 0.1, "dt_min": 0.03, "dt_max": 0.2, "phases": phases},
        "references": {"com_target": [top_x + 0.2, 0.0, 4 * rise + 0.8]},
        "settings": {"mode": "time"},
    })


def asymmetric_walk(name="asymmetric_walk", wide=-0.45, strips=True):
    """Left footholds near the centre line, right footholds placed wide on a broad strip."""
    stride = 0.25
    holds = [(0, (0.0, 0.1, 0.0), 0), (1, (0.0, wide, 0.0), 1)]
    xl = xr = 0.0
    for k in range(8):
        last = k == 7
        if k % 2 == 0:
            xl = xr if last else round(xr + stride, 9)
            holds.append((0, (xl, 0.1, 0.0), 0))
        else:
            xr = xl if last else round(xl + stride, 9)
            holds.append((1, (xr, wide, 0.0), 1))
    phases, N = gait(holds, ds=2, ss=4)
    write(name, {
        "name": name,
        "description": "Biped walking with its right footholds placed far to the side on a wide strip.",
        "robot": dict(biped(), initial_state={"com": [0.0, (0.1 + wide) / 2, 0.8]}),
        "terrain": {"surfaces": [rect(-0.5, 2.5, 0.02, 0.3), rect(-0.5, 2.5, -0.6, -0.02)]},
        "schedule": {"horizon": N, "dt": 0.1, "dt_min": 0.05, "dt_max": 0.2, "phases": phases},
        "references": {"com_target": [(xl + xr) / 2, (0.1 + wide) / 2, 0.8]},
        "settings": {"mode": "contacts"},
    })


def hand_assisted_stairs():
    """Biped climbing four steps while its left hand holds a sloped rail, regrasping twice."""
    rise, run = 0.15, 0.3
    steps = [rect(-0.6, 0.15, -0.4, 0.25, 0.0)]
    for k in range(1, 5):
        x0 = 0.15 + (k - 1) * run
        steps.append(rect(x0 + 0.01, x0 + run - 0.01 if k < 4 else x0 + 0.8, -0.4, 0.25, k * rise))
    rail_z = lambda x: round(1.0 + (rise / run) * x, 9)
    rail = {"corners": [[-0.4, 0.3, rail_z(-0.4)], [1.6, 0.3, rail_z(1.6)], [1.6, 0.4, rail_z(1.6)],
                        [-0.4, 0.4, rail_z(-0.4)]], "friction": 0.8}
    xs = [0.3 + run * k for k in range(4)]
    holds = [(0, (0.0, 0.1, 0.0), 0), (1, (0.0, -0.1, 0.0), 0)]
    for k in range(4):
        holds.append((k % 2, (xs[k], 0.1 if k % 2 == 0 else -0.1, (k + 1) * rise), k + 1))
    holds.append((1, (xs[3], -0.1, 4 * rise), 4))
    feet, N = gait(holds, ds=3, ss=5)
    grips = [(1, 14, 0.0), (17, 30, 0.45), (33, N, 0.9)]
    hand = [{"endeffector": "lh", "steps": [a, b], "surface": 5, "position": [x, 0.35, rail_z(x)]}
            for a, b, x in grips]
    phases = sorted(feet + hand, key=lambda ph: (ph["steps"][0], ph["endeffector"]))
    robot = biped(mass=40.0, reach=1.1)
    robot["endeffectors"].append({"id": "lh", "hand": True, "max_reach": 0.9,
                                  "cop_min": [-0.02, -0.02], "cop_max": [0.02, 0.02]})
    robot["initial_state"] = {"com": [0.0, 0.0, 0.85]}
    write("hand_assisted_stairs", {
        "name": "hand_assisted_stairs",
        "description": "Biped climbing four 0.15 m steps with its left hand on a rail.",
        "robot": robot,
        "terrain": {"surfaces": steps + [rail]},
        "schedule": {"horizon": N, "dt": 0.1, "dt_min": 0.05, "dt_max": 0.2, "phases": phases},
        "references": {"com_target": [xs[3], 0.0, 4 * rise + 0.85]},
        "settings": {"mode": "momentum"},
    })


def gallop():
    """Quadruped bounding forward: hind pair, front pair, then a flight phase with no contact."""
    dt, stance, flight, cycles = 0.05, 4, 3, 3
    speed, body = 1.0, 0.5
    feet = [("lf", 0.25, 0.15), ("rf", 0.25, -0.15), ("lh", -0.25, 0.15), ("rh", -0.25, -0.15)]
    phases = []
    t = 1
    pre = 4
    for ident, x, y in feet:
        phases.append({"endeffector": ident, "steps": [1, pre], "surface": 0, "position": [x, y, 0.0]})
    t = pre + 1
    for c in range(cycles):
        # hind stance, front stance, flight
        for group, dx in (("h", -0.25), ("f", 0.25)):
            centre = round(speed * (t - 1 + stance / 2) * dt, 9)
            for ident, x, y in feet:
                if ident.endswith(group):
                    phases.append({"endeffector": ident, "steps": [t, t + stance - 1], "surface": 0,
                                   "position": [round(centre + dx, 9), y, 0.0]})
            t += stance
        t += flight
    xe = round(speed * (t - 1) * dt, 9)
    N = t + pre - 1
    for ident, x, y in feet:
        phases.append({"endeffector": ident, "steps": [t, N], "surface": 0, "position": [round(xe + x, 9), y, 0.0]})
    phases.sort(key=lambda ph: (ph["steps"][0], ph["endeffector"]))
    write("gallop", {
        "name": "gallop",
        "description": "Quadruped bounding with a flight phase after every front stance.",
        "robot": {"mass": 20.0, "initial_state": {"com": [0.0, 0.0, 0.45]},
                  "endeffectors": [dict(id=i, max_reach=0.65, **FOOT) for i, _, _ in feet]},
        "terrain": {"surfaces": [rect(-1, 4, -1, 1)]},
        "schedule": {"horizon": N, "dt": dt, "dt_min": 0.02, "dt_max": 0.1, "phases": phases},
        "references": {"com_target": [xe, 0.0, 0.45]},
        "settings": {"mode": "momentum"},
    })


def torque_redistribution():
    """A foot and a hand share the weight; the foot's joint is weaker than the hand's."""
    N = 10
    write("torque_redistribution", {
        "name": "torque_redistribution",
        "description": "Two contacts holding a body still; joint 0 carries the foot's normal force and is "
                       "bounded, joint 1 carries the hand's and is not.",
        "robot": {"mass": 10.0, "initial_state": {"com": [0.0, 0.0, 0.7]},
                  "endeffectors": [dict(id="foot", max_reach=1.0, **FOOT),
                                   {"id": "hand", "hand": True, "max_reach": 1.0,
                                    "cop_min": [-0.02, -0.02], "cop_max": [0.02, 0.02]}]},
        "terrain": {"surfaces": [rect(-1, 1, -1, 1), rect(0.05, 0.45, -0.3, 0.3, 0.5)]},
        "schedule": {"horizon": N, "dt": 0.1, "phases": [
            {"endeffector": "foot", "steps": [1, N], "surface": 0, "position": [-0.15, 0.0, 0.0]},
            {"endeffector": "hand", "steps": [1, N], "surface": 1, "position": [0.15, 0.0, 0.5]}]},
        "settings": {"mode": "momentum", "torque_limits": True},
        "torque_limits": {"tau_min": [None, None], "tau_max": [40.0, None], "offset": [0.0, 0.0],
                          "maps": {"foot": [[0, 0, 1, 0, 0, 0], [0, 0, 0, 0, 0, 0]],
                                   "hand": [[0, 0, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]]}},
    })


def stepping_stones():
    """Biped crossing six square stones between two platforms; the four middle footholds are
    left to the contact planner."""
    stones = [rect(x - 0.1, x + 0.1, y - 0.1, y + 0.1, z) for x, y, z in
              [(0.35, 0.2, 0.05), (0.35, -0.2, 0.0), (0.7, 0.15, 0.1), (0.7, -0.25, 0.05),
               (1.05, 0.2, 0.0), (1.05, -0.15, 0.1)]]
    surfaces = [rect(-0.6, 0.1, -0.5, 0.5)] + stones + [rect(1.3, 2.0, -0.5, 0.5)]
    goal = len(surfaces) - 1
    holds = [(0, (0.0, 0.15, 0.0), 0), (1, (0.0, -0.15, 0.0), 0),
             (0, (0.35, 0.2, 0.05), None), (1, (0.7, -0.25, 0.05), None),
             (0, (1.05, 0.2, 0.0), None), (1, (1.05, -0.15, 0.1), None),
             (0, (1.45, 0.15, 0.0), goal), (1, (1.45, -0.15, 0.0), goal)]
    phases, N = gait(holds, ds=3, ss=4)
    write("stepping_stones", {
        "name": "stepping_stones",
        "description": "Biped crossing a field of six stones; four footholds are planned.",
        "robot": dict(biped(mass=30.0, reach=1.0), initial_state={"com": [0.0, 0.0, 0.8]}),
        "terrain": {"surfaces": surfaces},
        "schedule": {"horizon": N, "dt": 0.1, "phases": phases},
        "references": {"com_target": [1.45, 0.0, 0.8]},
        "settings": {"mode": "momentum", "mip": {"reach": [{"step_min": [-0.1, -0.6, -0.2], "step_max": [0.6, 0.6, 0.2]}]}},
    })


if __name__ == "__main__":
    static_stand()
    flat_walk()
    tilted_stairs(0.35, "tilted_stairs_mu035", roll=math.radians(24.0))
    tilted_stairs(0.25, "tilted_stairs_mu025", roll=math.radians(24.0))
    hand_assisted_stairs()
    gallop()
    asymmetric_walk()
    stepping_stones()
    torque_redistribution()
