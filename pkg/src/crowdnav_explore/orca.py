"""Optimal reciprocal collision avoidance.

Each neighbor induces one half-plane of permitted velocities (the agent
taking half the responsibility for avoidance); the new velocity is the point
of the half-plane intersection, within the speed disc, closest to the
preferred velocity.  Infeasible systems fall back to a three-stage program
that minimizes the largest constraint violation.

Used as the policy of every simulated human (who never see the robot) and as
the training-free robot baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Determinant threshold below which two constraint directions count as parallel.
_DET_EPSILON = 1e-5
_TINY = 1e-12


@dataclass(frozen=True)
class OrcaParams:
    time_horizon: float = 5.0
    neighbor_dist: float = 10.0
    max_neighbors: int = 10
    time_step: float = 0.25
    safety_margin: float = 0.0

    def __post_init__(self):
        if self.time_horizon <= 0 or self.neighbor_dist <= 0 or self.time_step <= 0:
            raise ValueError("ORCA parameters must be positive")
        if self.max_neighbors <= 0:
            raise ValueError("max_neighbors must be positive")
        if self.safety_margin < 0:
            raise ValueError("safety_margin must be nonnegative")


@dataclass(frozen=True)
class HalfPlane:
    """Velocity constraint line; the permitted side is the left of direction."""

    point: tuple[float, float]
    direction: tuple[float, float]

    def __post_init__(self):
        norm = math.hypot(*self.direction)
        if abs(norm - 1.0) > 1e-9:
            raise ValueError("direction must be a unit vector")

    def violation(self, vx: float, vy: float) -> float:
        """Signed distance by which (vx, vy) lies on the forbidden side."""
        dx, dy = self.direction
        px, py = self.point
        return dx * (py - vy) - dy * (px - vx)


def _det(ax: float, ay: float, bx: float, by: float) -> float:
    return ax * by - ay * bx


def _lp1(
    lines: list[HalfPlane],
    index: int,
    radius: float,
    opt_x: float,
    opt_y: float,
    directional: bool,
) -> tuple[bool, float, float]:
    """Optimize along lines[index] subject to the disc and lines[:index]."""
    px, py = lines[index].point
    dx, dy = lines[index].direction
    dot = px * dx + py * dy
    discriminant = dot * dot + radius * radius - (px * px + py * py)
    if discriminant < 0.0:
        # line entirely outside the disc
        return False, 0.0, 0.0
    sqrt_disc = math.sqrt(discriminant)
    t_left = -dot - sqrt_disc
    t_right = -dot + sqrt_disc

    for i in range(index):
        qx, qy = lines[i].point
        ex, ey = lines[i].direction
        denominator = _det(dx, dy, ex, ey)
        numerator = _det(ex, ey, px - qx, py - qy)
        if abs(denominator) <= _DET_EPSILON:
            if numerator < 0.0:
                return False, 0.0, 0.0
            continue
        t = numerator / denominator
        if denominator >= 0.0:
            t_right = min(t_right, t)
        else:
            t_left = max(t_left, t)
        if t_left > t_right:
            return False, 0.0, 0.0

    if directional:
        t = t_right if (opt_x * dx + opt_y * dy) > 0.0 else t_left
    else:
        t = dx * (opt_x - px) + dy * (opt_y - py)
        t = min(max(t, t_left), t_right)
    return True, px + t * dx, py + t * dy


def _lp2(
    lines: list[HalfPlane],
    radius: float,
    opt_x: float,
    opt_y: float,
    directional: bool,
) -> tuple[int, float, float]:
    """Incremental 2D LP.  Returns (# lines satisfied, result)."""
    if directional:
        rx, ry = opt_x * radius, opt_y * radius
    elif opt_x * opt_x + opt_y * opt_y > radius * radius:
        norm = math.hypot(opt_x, opt_y)
        rx, ry = opt_x / norm * radius, opt_y / norm * radius
    else:
        rx, ry = opt_x, opt_y

    for i, line in enumerate(lines):
        px, py = line.point
        dx, dy = line.direction
        if _det(dx, dy, px - rx, py - ry) > 0.0:
            ok, nx, ny = _lp1(lines, i, radius, opt_x, opt_y, directional)
            if not ok:
                return i, rx, ry
            rx, ry = nx, ny
    return len(lines), rx, ry


def _lp3(
    lines: list[HalfPlane],
    begin: int,
    radius: float,
    rx: float,
    ry: float,
) -> tuple[float, float]:
    """Fallback program minimizing the largest constraint violation."""
    distance = 0.0
    for i in range(begin, len(lines)):
        px, py = lines[i].point
        dx, dy = lines[i].direction
        if _det(dx, dy, px - rx, py - ry) > distance:
            projected: list[HalfPlane] = []
            for j in range(i):
                qx, qy = lines[j].point
                ex, ey = lines[j].direction
                determinant = _det(dx, dy, ex, ey)
                if abs(determinant) <= _DET_EPSILON:
                    if dx * ex + dy * ey > 0.0:
                        continue  # parallel, same direction
                    cx, cy = 0.5 * (px + qx), 0.5 * (py + qy)
                else:
                    scale = _det(ex, ey, px - qx, py - qy) / determinant
                    cx, cy = px + scale * dx, py + scale * dy
                gx, gy = ex - dx, ey - dy
                norm = math.hypot(gx, gy)
                projected.append(HalfPlane((cx, cy), (gx / norm, gy / norm)))
            count, nx, ny = _lp2(projected, radius, -dy, dx, True)
            if count >= len(projected):
                # keep the new point only when the sub-program fully succeeded
                rx, ry = nx, ny
            distance = _det(dx, dy, px - rx, py - ry)
    return rx, ry


def solve_lp(
    lines: list[HalfPlane],
    v_pref: tuple[float, float],
    v_max: float,
) -> np.ndarray:
    """Closest point to v_pref in the intersection of half-planes and disc.

    When the intersection is empty, returns the point (within the disc)
    minimizing the maximum signed violation over all constraints.
    """
    if v_max <= 0:
        raise ValueError("v_max must be positive")
    count, rx, ry = _lp2(lines, v_max, float(v_pref[0]), float(v_pref[1]), False)
    if count < len(lines):
        rx, ry = _lp3(lines, count, v_max, rx, ry)
    return np.array([rx, ry])


def orca_lines(agent, neighbors, params: OrcaParams) -> list[HalfPlane]:
    """One permitted-velocity half-plane per effective neighbor.

    ``agent`` and each neighbor expose position, velocity and radius.  Only
    the nearest ``max_neighbors`` within ``neighbor_dist`` generate
    constraints.
    """
    px, py = float(agent.position[0]), float(agent.position[1])
    vx, vy = float(agent.velocity[0]), float(agent.velocity[1])
    inv_horizon = 1.0 / params.time_horizon
    inv_step = 1.0 / params.time_step
    limit_sq = params.neighbor_dist * params.neighbor_dist

    ranked = []
    for idx, other in enumerate(neighbors):
        rel_x = float(other.position[0]) - px
        rel_y = float(other.position[1]) - py
        dist_sq = rel_x * rel_x + rel_y * rel_y
        if dist_sq < limit_sq:
            ranked.append((dist_sq, idx))
    ranked.sort()
    ranked = ranked[: params.max_neighbors]

    lines: list[HalfPlane] = []
    for dist_sq, idx in ranked:
        other = neighbors[idx]
        rel_x = float(other.position[0]) - px
        rel_y = float(other.position[1]) - py
        rvx = vx - float(other.velocity[0])
        rvy = vy - float(other.velocity[1])
        combined = float(agent.radius) + float(other.radius) + params.safety_margin
        combined_sq = combined * combined

        if dist_sq > combined_sq:
            # no current overlap: velocity obstacle truncated at the horizon
            wx = rvx - inv_horizon * rel_x
            wy = rvy - inv_horizon * rel_y
            w_len_sq = wx * wx + wy * wy
            dot1 = wx * rel_x + wy * rel_y
            if dot1 < 0.0 and dot1 * dot1 > combined_sq * w_len_sq:
                # project on the cut-off circle
                w_len = math.sqrt(w_len_sq)
                ux, uy = wx / w_len, wy / w_len
                direction = (uy, -ux)
                scale = combined * inv_horizon - w_len
                u = (scale * ux, scale * uy)
            else:
                # project on the nearer leg; exact ties deflect left
                leg = math.sqrt(dist_sq - combined_sq)
                if _det(rel_x, rel_y, wx, wy) >= 0.0:
                    direction = (
                        (rel_x * leg - rel_y * combined) / dist_sq,
                        (rel_x * combined + rel_y * leg) / dist_sq,
                    )
                else:
                    direction = (
                        -(rel_x * leg + rel_y * combined) / dist_sq,
                        -(-rel_x * combined + rel_y * leg) / dist_sq,
                    )
                dot2 = rvx * direction[0] + rvy * direction[1]
                u = (dot2 * direction[0] - rvx, dot2 * direction[1] - rvy)
        else:
            # already overlapping: resolve within one time step
            wx = rvx - inv_step * rel_x
            wy = rvy - inv_step * rel_y
            w_len = math.hypot(wx, wy)
            if w_len < _TINY:
                dist = math.sqrt(dist_sq)
                if dist < _TINY:
                    ux, uy = 1.0, 0.0
                else:
                    ux, uy = -rel_x / dist, -rel_y / dist
            else:
                ux, uy = wx / w_len, wy / w_len
            direction = (uy, -ux)
            scale = combined * inv_step - w_len
            u = (scale * ux, scale * uy)

        lines.append(
            HalfPlane(
                point=(vx + 0.5 * u[0], vy + 0.5 * u[1]),
                direction=direction,
            )
        )
    return lines


def preferred_velocity(agent, params: OrcaParams) -> tuple[float, float]:
    """Straight-to-goal velocity at v_pref, clipped to the remaining distance."""
    gx = float(agent.goal[0]) - float(agent.position[0])
    gy = float(agent.goal[1]) - float(agent.position[1])
    dist = math.hypot(gx, gy)
    if dist < _TINY:
        return 0.0, 0.0
    speed = min(float(agent.v_pref), dist / params.time_step)
    return gx / dist * speed, gy / dist * speed


def orca_velocity(agent, neighbors, params: OrcaParams) -> np.ndarray:
    """New velocity for one agent given a snapshot of its neighbors.

    ``agent`` additionally exposes v_pref and goal.  The returned speed never
    exceeds the agent's v_pref.
    """
    lines = orca_lines(agent, neighbors, params)
    pref = preferred_velocity(agent, params)
    return solve_lp(lines, pref, float(agent.v_pref))
