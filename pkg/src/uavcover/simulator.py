"""Explicit rotation schedules for coverage plans and their exact verification.

Each cycle is run as a slotted rotation at its first subarea: a slot opens every
``d`` seconds (the dwell), and the longest-waiting charged UAV at the station
takes it. It flies out, covers every subarea of the cycle for ``d`` in order,
flies home and charges. When no charged UAV is waiting the slot stays empty and
the gap ripples down the cycle as a coverage hole, so an undersized rotation
shows up as a continuous-coverage violation rather than an energy overdraft.

Time is exact (``Fraction``) everywhere; intervals are closed-open.
"""
from __future__ import annotations

import heapq
import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path

from .energy import EnergyProfile, energy_profile
from .planner import CoveragePlan, Cycle, InfeasibleError, rotation_demand
from .scenario import Scenario

COVER, TRAVEL, CHARGE, IDLE = "cover", "travel", "charge", "idle"
CONSTRAINTS = ("C3", "C4", "C5", "C6", "C7", "C8", "C9", "C10")


@dataclass(frozen=True)
class Segment:
    kind: str
    start: Fraction
    end: Fraction
    subarea: int | None = None  # cover only
    origin: int | None = None  # travel only
    dest: int | None = None  # travel only

    @property
    def length(self) -> Fraction:
        return self.end - self.start


@dataclass(frozen=True)
class UavTimeline:
    uav: int
    cycle: int
    segments: tuple[Segment, ...]


@dataclass(frozen=True)
class CycleRotation:
    subareas: tuple[int, ...]
    additional_uavs: int
    dwell_s: Fraction
    period_s: Fraction
    fill_end_s: Fraction


@dataclass(frozen=True)
class Schedule:
    uavs: tuple[UavTimeline, ...]
    horizon_s: Fraction
    station: int
    rotations: tuple[CycleRotation, ...] = ()
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class Violation:
    constraint: str
    time_s: Fraction
    description: str


@dataclass(frozen=True)
class Verdict:
    violations: tuple[Violation, ...]
    notes: tuple[str, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def constraint_ids(self) -> set[str]:
        return {v.constraint for v in self.violations}


# --- construction --------------------------------------------------------------

def rotation_dwell(cycle: Cycle, travel_time_s, charge_time_s) -> Fraction:
    """Dwell per subarea: just enough for the rotation, capped by the battery."""
    cap = cycle.dwell_time_s
    if cycle.additional_uavs <= 0:
        return cap
    d = rotation_demand(cycle.n, travel_time_s, charge_time_s) / cycle.additional_uavs
    return d if d <= cap else cap


def cycle_rotation(s: Scenario, cycle: Cycle, dwell_s=None) -> CycleRotation:
    T = s.travel_time_s
    d = Fraction(dwell_s) if dwell_s is not None else rotation_dwell(cycle, T, s.charge_time_s)
    n = cycle.n
    return CycleRotation(
        subareas=cycle.subareas,
        additional_uavs=cycle.additional_uavs,
        dwell_s=d,
        period_s=(n + cycle.additional_uavs) * d,
        fill_end_s=T + (n - 1) * (d + T),
    )


def horizon_for_laps(s: Scenario, plan: CoveragePlan, laps) -> Fraction:
    rots = [cycle_rotation(s, c) for c in plan.cycles]
    return max(r.fill_end_s + Fraction(laps) * r.period_s for r in rots)


def _clip(segments: list[Segment], horizon: Fraction) -> tuple[Segment, ...]:
    out = []
    for seg in segments:
        if seg.start >= horizon:
            break
        if seg.end > horizon:
            seg = replace(seg, end=horizon)
        if seg.end > seg.start:
            out.append(seg)
    return tuple(out)


def _rotation_timelines(rot: CycleRotation, T: Fraction, Tc: Fraction, station: int,
                        horizon: Fraction, first_uav: int, cycle_index: int) -> list[UavTimeline]:
    d = rot.dwell_s
    fleet = len(rot.subareas) + rot.additional_uavs
    timelines: dict[int, list[Segment]] = {u: [] for u in range(fleet)}
    free_at = {u: Fraction(0) for u in range(fleet)}
    ready = [(Fraction(0), u) for u in range(fleet)]
    heapq.heapify(ready)
    slot = 0
    while slot * d < horizon and ready:
        depart = slot * d
        slot += 1
        if ready[0][0] > depart:
            continue  # nobody charged: this entry slot stays empty
        _, u = heapq.heappop(ready)
        segs = timelines[u]
        if depart > free_at[u]:
            segs.append(Segment(IDLE, free_at[u], depart))
        t = depart
        here = station
        for j in rot.subareas:
            segs.append(Segment(TRAVEL, t, t + T, origin=here, dest=j))
            t += T
            segs.append(Segment(COVER, t, t + d, subarea=j))
            t += d
            here = j
        segs.append(Segment(TRAVEL, t, t + T, origin=here, dest=station))
        t += T
        if Tc > 0:
            segs.append(Segment(CHARGE, t, t + Tc))
            t += Tc
        free_at[u] = t
        heapq.heappush(ready, (t, u))
    out = []
    for u in range(fleet):
        segs = timelines[u]
        if free_at[u] < horizon:
            segs.append(Segment(IDLE, free_at[u], horizon))
        out.append(UavTimeline(first_uav + u, cycle_index, _clip(segs, horizon)))
    return out


def build_schedule(s: Scenario, plan: CoveragePlan, horizon_s, strict: bool = True,
                   dwell_overrides: dict[int, Fraction] | None = None) -> Schedule:
    """Build the rotation timeline of every UAV in ``plan`` over ``[0, horizon_s)``.

    With ``strict`` a cycle whose spare count fails the rotation inequality is
    rejected; otherwise it is built anyway so verification can expose it.
    ``dwell_overrides`` maps cycle index to a forced dwell (fault injection).
    """
    horizon = Fraction(horizon_s)
    if horizon <= 0:
        raise ValueError("horizon must be positive")
    T, Tc = s.travel_time_s, s.charge_time_s
    dwell_overrides = dwell_overrides or {}
    rotations, timelines, warnings = [], [], []
    next_uav = 0
    for ci, cycle in enumerate(plan.cycles):
        if strict and not cycle.satisfies_rotation_bound(T, Tc):
            raise InfeasibleError(
                f"cycle {ci} ({cycle.n} subareas) cannot rotate with {cycle.additional_uavs} additional UAVs")
        rot = cycle_rotation(s, cycle, dwell_overrides.get(ci))
        rotations.append(rot)
        if horizon < rot.fill_end_s + rot.period_s:
            warnings.append(f"horizon shorter than one full rotation of cycle {ci}")
        tls = _rotation_timelines(rot, T, Tc, s.charging_station, horizon, next_uav, ci)
        next_uav += len(tls)
        timelines.extend(tls)
    return Schedule(tuple(timelines), horizon, s.charging_station, tuple(rotations), tuple(warnings))


# --- verification -----------------------------------------------------------------

def well_formed_errors(sch: Schedule, travel_time_s) -> list[str]:
    errors = []
    T = Fraction(travel_time_s)
    for tl in sch.uavs:
        prev_end = Fraction(0)
        for seg in tl.segments:
            if seg.end < seg.start:
                errors.append(f"uav {tl.uav}: segment ends before it starts at {seg.start}")
            if seg.start < prev_end:
                errors.append(f"uav {tl.uav}: overlapping segments at {seg.start}")
            if seg.kind == TRAVEL and seg.length != T and seg.end != sch.horizon_s:
                errors.append(f"uav {tl.uav}: travel at {seg.start} lasts {seg.length}, not {T}")
            if seg.kind not in (COVER, TRAVEL, CHARGE, IDLE):
                errors.append(f"uav {tl.uav}: unknown segment kind {seg.kind!r}")
            prev_end = seg.end
    return errors


def verify(s: Scenario, sch: Schedule, targets=None, profile: EnergyProfile | None = None) -> Verdict:
    """Check a schedule against the continuous-coverage constraints.

    Coverage gaps and overlaps are reported once, as C4; C6 is reserved for
    handoffs that break the distinct-UAV / immediate-departure rule.
    """
    profile = profile or energy_profile(s)
    problems = well_formed_errors(sch, s.travel_time_s)
    if problems:
        raise ValueError("malformed schedule: " + "; ".join(problems[:5]))
    targets = list(s.coverage_subareas if targets is None else targets)
    H = sch.horizon_s
    T, Tc = s.travel_time_s, s.charge_time_s
    station = sch.station
    e = Fraction(profile.coverage_power_W)
    hop = profile.hop_energy_J
    E = profile.battery_J
    out: list[Violation] = []
    notes = []

    covers: dict[int, list[tuple[Segment, int]]] = {}
    for tl in sch.uavs:
        for seg in tl.segments:
            if seg.kind == COVER:
                covers.setdefault(seg.subarea, []).append((seg, tl.uav))

    for j in targets:
        segs = sorted(covers.get(j, []), key=lambda p: (p[0].start, p[0].end, p[1]))
        if not segs:
            out.append(Violation("C3", Fraction(0), f"subarea {j} is never covered"))
            continue
        first = segs[0][0].start
        notes.append(f"subarea {j}: continuous coverage checked from {first}")
        reach = first
        for seg, _ in segs:
            if seg.start > reach:
                out.append(Violation("C4", reach, f"subarea {j} uncovered during [{reach}, {seg.start})"))
            elif seg.start < reach:
                out.append(Violation("C4", seg.start, f"subarea {j} covered twice from {seg.start}"))
            reach = max(reach, seg.end)
        if reach < H:
            out.append(Violation("C4", reach, f"subarea {j} uncovered during [{reach}, {H})"))
        starts: dict[Fraction, int] = {}
        for seg, u in segs:
            if seg.start in starts and starts[seg.start] != u:
                out.append(Violation("C5", seg.start, f"two UAVs arrive at subarea {j} at {seg.start}"))
            starts.setdefault(seg.start, u)
        by_start = {}
        for seg, u in segs:
            by_start.setdefault(seg.start, set()).add(u)
        for seg, u in segs:
            if seg.end < H and u in by_start.get(seg.end, ()):
                out.append(Violation("C6", seg.end, f"UAV {u} hands subarea {j} over to itself"))
    for j in covers:
        if j not in targets:
            out.append(Violation("C3", covers[j][0][0].start, f"cover segment at non-target subarea {j}"))

    for tl in sch.uavs:
        out.extend(_uav_checks(tl, H, T, Tc, station, e, hop, E))

    out.sort(key=lambda v: (v.time_s, CONSTRAINTS.index(v.constraint), v.description))
    return Verdict(tuple(out), tuple(notes))


def _uav_checks(tl: UavTimeline, H, T, Tc, station, e, hop, E) -> list[Violation]:
    out = []
    segs = tl.segments
    u = tl.uav

    for i, seg in enumerate(segs):
        nxt = segs[i + 1] if i + 1 < len(segs) and segs[i + 1].start == seg.end else None
        if seg.kind == COVER:
            if seg.length <= 0:
                out.append(Violation("C7", seg.start, f"UAV {u} has an empty cover segment at subarea {seg.subarea}"))
            if nxt is not None and not (nxt.kind == TRAVEL and nxt.origin == seg.subarea):
                out.append(Violation("C6", seg.end, f"UAV {u} stops covering subarea {seg.subarea} without leaving"))
        elif seg.kind == TRAVEL and seg.dest != station and seg.end < H and nxt is not None:
            if not (nxt.kind == COVER and nxt.subarea == seg.dest and nxt.length > 0):
                out.append(Violation("C7", seg.end, f"UAV {u} visits subarea {seg.dest} without covering it"))

    # C8: every completed return is followed by exactly one full charge before departing
    for i, seg in enumerate(segs):
        if not (seg.kind == TRAVEL and seg.dest == station and seg.length == T and seg.end < H):
            continue
        charges = []
        departed = False
        for later in segs[i + 1:]:
            if later.kind == TRAVEL:
                departed = True
                break
            if later.kind == CHARGE:
                charges.append(later)
        clipped = not departed and segs[-1].end == H
        if Tc == 0:
            bad = [c for c in charges if c.length != 0]
        elif not charges:
            bad = [] if clipped and (segs[-1].end - seg.end) < Tc else [None]
        else:
            bad = [c for c in charges if c.length != Tc and not (c.end == H and c.length < Tc)]
            if len(charges) > 1:
                bad.append(charges[1])
        if bad:
            out.append(Violation("C8", seg.end, f"UAV {u} does not charge for exactly {Tc} s after returning at {seg.end}"))

    # C9: departures and arrivals alternate; one open trip allowed at the horizon
    expect_departure = True
    for seg in segs:
        if seg.kind != TRAVEL:
            continue
        if seg.origin == station:
            if not expect_departure:
                out.append(Violation("C9", seg.start, f"UAV {u} departs the station twice without returning"))
            expect_departure = False
        if seg.dest == station and seg.length == T:
            if expect_departure:
                out.append(Violation("C9", seg.end, f"UAV {u} arrives at the station without having departed"))
            expect_departure = True
    if not expect_departure and segs and segs[-1].end < H:
        out.append(Violation("C9", segs[-1].end, f"UAV {u} never returns to the station"))

    # C10: energy between consecutive charges never exceeds the battery
    used = Fraction(0)
    flagged = False
    for seg in segs:
        if seg.kind == CHARGE:
            used, flagged = Fraction(0), False
            continue
        if seg.kind == COVER:
            used += seg.length * e
        elif seg.kind == TRAVEL:
            used += hop * seg.length / T
        if used > E and not flagged:
            out.append(Violation("C10", seg.end, f"UAV {u} needs {float(used):.1f} J > battery {float(E):.1f} J"))
            flagged = True
        if Tc == 0 and seg.kind == TRAVEL and seg.dest == station and seg.length == T:
            used, flagged = Fraction(0), False  # instantaneous recharge
    return out


def battery_levels(s: Scenario, tl: UavTimeline, profile: EnergyProfile | None = None) -> list[tuple[Fraction, Fraction]]:
    """(time, remaining energy) at every segment boundary of one UAV."""
    profile = profile or energy_profile(s)
    e, hop, E, T = Fraction(profile.coverage_power_W), profile.hop_energy_J, profile.battery_J, s.travel_time_s
    level = E
    points = [(Fraction(0), level)]
    for seg in tl.segments:
        if seg.kind == CHARGE:
            level = E
        elif seg.kind == COVER:
            level -= seg.length * e
        elif seg.kind == TRAVEL:
            level -= hop * seg.length / T
        points.append((seg.end, level))
        if s.charge_time_s == 0 and seg.kind == TRAVEL and seg.dest == s.charging_station and seg.length == T:
            level = E
    return points


# --- faults, empirical minimum -----------------------------------------------------

def _replace_uav(sch: Schedule, uav: int, segments: list[Segment]) -> Schedule:
    uavs = tuple(replace(tl, segments=tuple(segments)) if tl.uav == uav else tl for tl in sch.uavs)
    return replace(sch, uavs=uavs)


def _nth(segments, kind, occurrence):
    idx = [i for i, seg in enumerate(segments) if seg.kind == kind]
    if occurrence >= len(idx):
        raise IndexError(f"no {kind} segment #{occurrence}")
    return idx[occurrence]


def drop_cover_segment(sch: Schedule, uav: int, occurrence: int = 0) -> Schedule:
    """Remove one cover segment; the UAV's whereabouts during it become unknown."""
    segs = list(sch.uavs[uav].segments)
    del segs[_nth(segs, COVER, occurrence)]
    return _replace_uav(sch, uav, segs)


def shorten_charge(sch: Schedule, uav: int, occurrence: int = 0, by=1) -> Schedule:
    """Cut one charge short and idle for the remainder so the timing is unchanged."""
    segs = list(sch.uavs[uav].segments)
    i = _nth(segs, CHARGE, occurrence)
    charge = segs[i]
    cut = charge.end - Fraction(by)
    segs[i] = replace(charge, end=cut)
    if i + 1 < len(segs) and segs[i + 1].kind == IDLE:
        segs[i + 1] = replace(segs[i + 1], start=cut)
    else:
        segs.insert(i + 1, Segment(IDLE, cut, charge.end))
    return _replace_uav(sch, uav, segs)


def min_k_empirical(s: Scenario, cycle: Cycle, k_max: int = 64, laps=3) -> int:
    """Smallest spare count whose constructed rotation verifies cleanly."""
    profile = energy_profile(s)
    for k in range(1, k_max + 1):
        trial = CoveragePlan((replace(cycle, additional_uavs=k),))
        horizon = horizon_for_laps(s, trial, laps)
        sch = build_schedule(s, trial, horizon, strict=False)
        if verify(s, sch, targets=cycle.subareas, profile=profile).ok:
            return k
    raise InfeasibleError(f"unservable: no k <= {k_max} verifies")


# --- serialization -------------------------------------------------------------------

def _fr(x: Fraction) -> dict:
    return {"num": x.numerator, "den": x.denominator}


def _segment_to_dict(seg: Segment) -> dict:
    d = {"kind": seg.kind, "start_s": _fr(seg.start), "end_s": _fr(seg.end)}
    if seg.kind == COVER:
        d["subarea"] = seg.subarea
    elif seg.kind == TRAVEL:
        d["from"], d["to"] = seg.origin, seg.dest
    return d


def schedule_to_dict(sch: Schedule) -> dict:
    return {
        "horizon_s": _fr(sch.horizon_s),
        "station": sch.station,
        "warnings": list(sch.warnings),
        "cycles": [
            {"subareas": list(r.subareas), "k": r.additional_uavs, "dwell_s": _fr(r.dwell_s),
             "period_s": _fr(r.period_s), "fill_end_s": _fr(r.fill_end_s)}
            for r in sch.rotations
        ],
        "uavs": [
            {"uav": tl.uav, "cycle": tl.cycle, "segments": [_segment_to_dict(seg) for seg in tl.segments]}
            for tl in sch.uavs
        ],
    }


def verdict_to_dict(v: Verdict) -> dict:
    return {
        "ok": v.ok,
        "violations": [
            {"constraint": x.constraint, "time_s": _fr(x.time_s), "description": x.description}
            for x in v.violations
        ],
        "notes": list(v.notes),
    }


def save_schedule(sch: Schedule, path) -> None:
    Path(path).write_text(json.dumps(schedule_to_dict(sch), indent=1) + "\n")


def save_verdict(v: Verdict, path) -> None:
    Path(path).write_text(json.dumps(verdict_to_dict(v), indent=2) + "\n")
