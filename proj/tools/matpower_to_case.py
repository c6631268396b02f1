#!/usr/bin/env python3
"""Generate the shipped AC/DC case files under data/cases/ from MATPOWER data.

The IEEE 14-bus and 118-bus data are read through PYPOWER (``pip install
pypower``), which carries the MATPOWER case tables verbatim. The script then
applies the hybrid-grid modifications:

* AC branches between converter buses are removed and re-created as DC
  branches with the same series resistance.
* Converters are attached to the terminal buses with the coupling impedance
  and initial set-points listed below.
* Limits are tightened to the operating ranges used by the studies
  (14-bus: generator ranges, +/-0.5 p.u. reactive range, a switchable shunt
  bank at bus 9, tap changers in [0.9, 1.1] with step 0.0125).
* Costs are converted from $/h per MW to $/h per p.u. on the 100 MVA base.

For the 118-bus cases, initial converter set-points are the base-case flows
that the removed AC branches carried (from ``runpf``).

Usage:
    python3 tools/matpower_to_case.py [--out data/cases]
"""

import argparse
import copy
import json
import os

import numpy as np
from pypower.api import case14, case118, ppoption, runpf

# converter loss coefficients in p.u. (a, b, c)
LOSS = (11.033e-3, 3.464e-3, 5.534e-3)
DC_I_MAX = 1.2
TAP_RANGE = (0.9, 1.1, 0.0125)


def bus_kind(code):
    return {1: "pq", 2: "pv", 3: "slack"}[int(code)]


def base_case(mpc, name, description):
    base = mpc["baseMVA"]
    buses = []
    for b in mpc["bus"]:
        buses.append({
            "id": int(b[0]),
            "kind": bus_kind(b[1]),
            "p_load": b[2] / base,
            "q_load": b[3] / base,
            "shunt_g": b[4] / base,
            "shunt_b": b[5] / base,
            "v_min": float(b[12]),
            "v_max": float(b[11]),
            "v_ref": 1.0,
        })
    branches = []
    for br in mpc["branch"]:
        if br[10] == 0:
            continue
        entry = {
            "from": int(br[0]),
            "to": int(br[1]),
            "r": float(br[2]),
            "x": float(br[3]),
            "b_charging": float(br[4]),
            "s_max": br[5] / base if br[5] > 0 else 99.0,
        }
        if br[8] != 0:
            entry["ratio"] = float(br[8])
            entry["tap"] = {"ratio_min": TAP_RANGE[0], "ratio_max": TAP_RANGE[1], "step": TAP_RANGE[2]}
        branches.append(entry)
    generators = []
    for g, cost in zip(mpc["gen"], mpc["gencost"]):
        assert cost[0] == 2 and cost[3] == 3, "quadratic polynomial cost expected"
        generators.append({
            "bus": int(g[0]),
            "p": g[1] / base,
            "v_set": float(g[5]),
            "p_min": g[9] / base,
            "p_max": g[8] / base,
            "q_min": g[4] / base,
            "q_max": g[3] / base,
            "cost_a": cost[4] * base * base,
            "cost_b": cost[5] * base,
            "cost_c": float(cost[6]),
            "controllable": True,
        })
    return {
        "name": name,
        "description": description,
        "s_base": base,
        "buses": buses,
        "branches": branches,
        "generators": generators,
        "shunts": [],
        "dc_buses": [],
        "dc_branches": [],
        "converters": [],
    }


def find_branch(case, a, b):
    for i, br in enumerate(case["branches"]):
        if {br["from"], br["to"]} == {a, b}:
            return i
    raise KeyError((a, b))


def add_dc_grid(case, terminals, links, name, description):
    """terminals: list of (ac_bus, r, x, p_s, q_s, mode); links: list of (i, j) terminal pairs."""
    out = copy.deepcopy(case)
    out["name"] = name
    out["description"] = description
    removed = []
    for i, j in links:
        k = find_branch(out, terminals[i][0], terminals[j][0])
        removed.append(out["branches"][k])
        del out["branches"][k]
    for n, t in enumerate(terminals):
        out["dc_buses"].append({"id": n + 1, "u_min": 0.94, "u_max": 1.06, "u_ref": 1.0})
    for (i, j), br in zip(links, removed):
        out["dc_branches"].append({"from": i + 1, "to": j + 1, "r": br["r"], "i_max": DC_I_MAX})
    for n, (ac_bus, r, x, p_s, q_s, mode) in enumerate(terminals):
        out["converters"].append({
            "ac_bus": ac_bus,
            "dc_bus": n + 1,
            "r_xfmr": r,
            "x_xfmr": x,
            "b_filter": 0.0,
            "loss_a": LOSS[0],
            "loss_b": LOSS[1],
            "loss_c": LOSS[2],
            "mode": mode,
            "p_s_min": -1.0,
            "p_s_max": 1.0,
            "q_s_min": -1.0,
            "q_s_max": 1.0,
            "pq_circle": {"p0": 0.0, "q0": 0.0, "r_min": 0.0, "r_max": 1.0},
            "p_s": p_s,
            "q_s": q_s,
        })
    return out


def udc_qs(q_s):
    return {"type": "const_udc_const_qs", "u_dc": 1.0, "q_s": q_s}


def ps_qs(p_s, q_s):
    return {"type": "const_ps_const_qs", "p_s": p_s, "q_s": q_s}


def droop(p_s, q_s):
    return {"type": "droop", "slope": 0.005, "u_dc": 1.0, "p_s": p_s, "q_s": q_s}


def terminals_with_slack(spec, slack, use_droop=False):
    """spec: list of (ac_bus, r, x, p_s, q_s); slack: index of the constant-U_dc terminal."""
    out = []
    for n, (bus, r, x, p, q) in enumerate(spec):
        if use_droop:
            mode = droop(p, q)
        elif n == slack:
            mode = udc_qs(q)
        else:
            mode = ps_qs(p, q)
        out.append((bus, r, x, p, q, mode))
    return out


def build_case14(outdir):
    mpc = case14()
    ac = base_case(mpc, "case14_ac", "IEEE 14-bus AC system, no DC grid")
    # generator operating ranges of the study (p.u.), reactive range +/-0.5
    p_max = [3.32, 1.40, 0.30, 0.10, 0.10]
    for g, pmax in zip(ac["generators"], p_max):
        g["p_min"] = 0.0
        g["p_max"] = pmax
        g["q_min"] = -0.5
        g["q_max"] = 0.5
    # the bus 9 capacitor becomes a switchable bank
    for b in ac["buses"]:
        if b["id"] == 9:
            q0 = b["shunt_b"]
            b["shunt_b"] = 0.0
    ac["shunts"] = [{"bus": 9, "q": q0, "q_min": 0.0, "q_max": 0.5, "step": 0.01}]
    cases = {"case14_ac": ac}

    two = [(5, 0.0015, 0.1121, 0.495, -0.105), (4, 0.0015, 0.1121, -0.492, 0.116)]
    links2 = [(0, 1)]
    cases["case14_2t"] = add_dc_grid(
        ac, terminals_with_slack(two, 0), links2, "case14_2t",
        "IEEE 14-bus with branch 4-5 replaced by a 2-terminal DC link; VSC1 constant Udc/Qs, VSC2 constant Ps/Qs")
    cases["case14_2t_swapped"] = add_dc_grid(
        ac, terminals_with_slack(two, 1), links2, "case14_2t_swapped",
        "IEEE 14-bus 2-terminal DC link with the control modes of VSC1 and VSC2 exchanged")

    three = [(2, 0.0015, 0.150, 0.877, 0.001), (4, 0.0015, 0.150, -0.983, 0.124),
             (5, 0.0015, 0.150, 0.118, -0.135)]
    links3 = [(0, 1), (0, 2), (1, 2)]
    labels = {0: "case14_3t_vsc1_slack", 1: "case14_3t_vsc2_slack", 2: "case14_3t"}
    for slack, name in labels.items():
        cases[name] = add_dc_grid(
            ac, terminals_with_slack(three, slack), links3, name,
            f"IEEE 14-bus with branches 2-4, 2-5, 4-5 replaced by a 3-terminal DC grid; VSC{slack + 1} constant Udc/Qs")
    cases["case14_3t_droop"] = add_dc_grid(
        ac, terminals_with_slack(three, None, use_droop=True), links3, "case14_3t_droop",
        "IEEE 14-bus 3-terminal DC grid, all converters under voltage droop (slope 0.005)")
    write(cases, outdir)


def build_case118(outdir):
    mpc = case118()
    ac = base_case(mpc, "case118_ac", "IEEE 118-bus AC system, no DC grid")
    slack_bus = int(mpc["bus"][mpc["bus"][:, 1] == 3][0, 0])
    # fourteen largest cost-bearing units are dispatchable; the rest stay at base output
    real = [i for i, c in enumerate(mpc["gencost"]) if not (c[4] == 0.01 and c[5] == 40)]
    real = [i for i in real if int(mpc["gen"][i, 0]) != slack_bus]
    real.sort(key=lambda i: -mpc["gen"][i, 8])
    dispatchable = set(real[:14])
    for i, g in enumerate(ac["generators"]):
        g["controllable"] = i in dispatchable or g["bus"] == slack_bus

    res, ok = runpf(mpc, ppoption(VERBOSE=0, OUT_ALL=0))
    assert ok
    base = mpc["baseMVA"]

    def terminal_flow(bus, others):
        p = q = 0.0
        for br in res["branch"]:
            f, t = int(br[0]), int(br[1])
            if f == bus and t in others:
                p += br[13] / base
                q += br[14] / base
            elif t == bus and f in others:
                p += br[15] / base
                q += br[16] / base
        return round(p, 4), round(q, 4)

    cases = {"case118_ac": ac}
    r, x = 0.0015, 0.150
    two_buses = [103, 104]
    two = [(b, r, x, *terminal_flow(b, set(two_buses) - {b})) for b in two_buses]
    cases["case118_2t"] = add_dc_grid(
        ac, terminals_with_slack(two, 1), [(0, 1)], "case118_2t",
        "IEEE 118-bus with branch 103-104 replaced by a 2-terminal DC link; VSC1 constant Ps/Qs, VSC2 constant Udc/Qs")
    three_buses = [103, 105, 104]
    three = [(b, r, x, *terminal_flow(b, set(three_buses) - {b})) for b in three_buses]
    links3 = [(0, 2), (0, 1), (2, 1)]
    cases["case118_3t"] = add_dc_grid(
        ac, terminals_with_slack(three, 2), links3, "case118_3t",
        "IEEE 118-bus with branches 103-104, 103-105, 104-105 replaced by a 3-terminal DC grid; VSC3 constant Udc/Qs")
    cases["case118_3t_droop"] = add_dc_grid(
        ac, terminals_with_slack(three, None, use_droop=True), links3, "case118_3t_droop",
        "IEEE 118-bus 3-terminal DC grid, all converters under voltage droop (slope 0.005)")
    write(cases, outdir)


def clean(obj):
    if isinstance(obj, dict):
        return {k: clean(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return round(v, 10) if v != int(v) else float(int(v))
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def write(cases, outdir):
    os.makedirs(outdir, exist_ok=True)
    for name, case in cases.items():
        path = os.path.join(outdir, name + ".json")
        with open(path, "w") as fh:
            json.dump(clean(case), fh, indent=1)
            fh.write("\n")
        print("wrote", path)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    here = os.path.dirname(os.path.abspath(__file__))
    parser.add_argument("--out", default=os.path.join(here, "..", "data", "cases"))
    args = parser.parse_args()
    build_case14(args.out)
    build_case118(args.out)


if __name__ == "__main__":
    main()
