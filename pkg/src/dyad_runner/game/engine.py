"""Pure fixed-timestep rules of the runner game.

Every function here is a deterministic state transition: identical
inputs produce identical outputs, which is what makes record/replay and
the network-vs-headless equivalence checks possible. The session layer
owns the only mutable copy of the state.
"""

from __future__ import annotations

from ..config import GameConfig, Mode, Role
from .balloons import BalloonField
from .state import (
    AvatarState,
    CollabBall,
    CollectionEvent,
    NoiseState,
    TrialState,
    window_speed,
)


class TrialComplete(RuntimeError):
    """Raised when tick() is called past the trial duration."""


def resample_noise(noise: NoiseState, tick: int, config: GameConfig) -> NoiseState:
    """Redraw the PPS speed when `tick` starts a new 0.5 s noise window."""
    window = tick // config.noise_window_ticks
    boundary = tick % config.noise_window_ticks == 0
    if not boundary and window == noise.window_index:
        return noise
    return NoiseState(
        seed=noise.seed,
        window_index=window,
        current_speed=window_speed(noise.seed, window, config),
    )


def pps_lateral_command(roll_deg: float, noise: NoiseState, config: GameConfig) -> float:
    """Bang-bang joystick mapping: deadzone, then noise-drawn magnitude."""
    if abs(roll_deg) <= config.deadzone_deg:
        return 0.0
    return noise.current_speed if roll_deg > 0 else -noise.current_speed


def collab_ball(x1: float, x2: float, config: GameConfig) -> CollabBall:
    """Blue ball at the avatars' mean position, shrinking with separation.

    Full radius below one third of the track width, linear shrink to zero
    between one and two thirds, gone (scoring disabled) beyond that.
    """
    d = abs(x1 - x2)
    third = config.track_width / 3.0
    if d <= third:
        radius = config.ball_radius_max
    elif d < 2.0 * third:
        radius = config.ball_radius_max * (1.0 - (d - third) / third)
    else:
        radius = 0.0
    return CollabBall(x=(x1 + x2) / 2.0, radius=radius, active=radius > 0.0)


def check_collection(
    field: BalloonField,
    x_prev: float,
    x_now: float,
    z_prev: float,
    z_now: float,
    collector_radius: float,
    config: GameConfig,
) -> tuple[int, BalloonField, list[int]]:
    """Collect balloons whose depth was crossed during (z_prev, z_now].

    The collector's lateral position at each balloon's depth is linearly
    interpolated between the tick endpoints, so scoring does not depend
    on the tick rate. Contact requires the interpolated position within
    collector_radius + balloon_visual_radius of the balloon.
    """
    if z_prev >= z_now:
        raise ValueError("z_prev must be strictly less than z_now")
    points = 0
    collected: list[int] = []
    tolerance = config.collection_tolerance(collector_radius)
    dz = z_now - z_prev
    for idx, balloon in enumerate(field.balloons):
        if balloon.z <= z_prev:
            continue
        if balloon.z > z_now:
            break
        if balloon.collected:
            continue
        frac = (balloon.z - z_prev) / dz
        x_at = x_prev + (x_now - x_prev) * frac
        if abs(x_at - balloon.x) <= tolerance:
            field = field.collect(idx)
            collected.append(idx)
            points += 1
    return points, field, collected


def new_trial(
    mode: Mode,
    roles: tuple[Role, ...],
    fields: tuple[BalloonField, ...],
    noise_seeds: tuple[int | None, ...],
    config: GameConfig,
) -> TrialState:
    """Fresh trial state: avatars centered at x=0 and z=0."""
    avatars = tuple(AvatarState(role=r, x=0.0, z=0.0) for r in roles)
    noises = tuple(
        NoiseState.initial(seed, config) if seed is not None else None
        for seed in noise_seeds
    )
    ball = collab_ball(0.0, 0.0, config) if mode is Mode.COLLABORATIVE else None
    return TrialState(
        mode=mode,
        tick=0,
        avatars=avatars,
        fields=fields,
        scores=(0,) * len(fields),
        noises=noises,
        ball=ball,
    )


def tick(state: TrialState, commands: tuple[int, ...], config: GameConfig) -> TrialState:
    """Advance one fixed timestep. commands hold one direction (-1/0/+1) per avatar."""
    if state.tick >= config.ticks_per_trial:
        raise TrialComplete(f"trial already ran its {config.ticks_per_trial} ticks")
    if len(commands) != len(state.avatars):
        raise ValueError("one command per avatar required")
    t = state.tick
    dt = config.dt
    z_prev = config.depth_at(t)
    z_now = config.depth_at(t + 1)
    half = config.half_width

    noises = tuple(
        resample_noise(n, t, config) if n is not None else None for n in state.noises
    )

    avatars = []
    for i, avatar in enumerate(state.avatars):
        direction = commands[i]
        if direction not in (-1, 0, 1):
            raise ValueError(f"command must be -1, 0, or +1, got {direction!r}")
        if avatar.role is Role.PPS:
            noise = noises[i]
            if noise is None:
                raise ValueError("PPS avatar requires a noise stream")
            speed = noise.current_speed
        else:
            speed = config.pcg_lateral_speed
        velocity = direction * speed
        x = avatar.x + velocity * dt
        if x > half:
            x = half
        elif x < -half:
            x = -half
        avatars.append(
            AvatarState(role=avatar.role, x=x, z=z_now, lateral_velocity=velocity)
        )

    events: list[CollectionEvent] = []
    if state.mode is Mode.COLLABORATIVE:
        ball = collab_ball(avatars[0].x, avatars[1].x, config)
        field = state.fields[0]
        score = state.scores[0]
        if ball.active:
            ball_x_prev = (state.avatars[0].x + state.avatars[1].x) / 2.0
            points, field, hit = check_collection(
                field, ball_x_prev, ball.x, z_prev, z_now, ball.radius, config
            )
            score += points
            events.extend(CollectionEvent(unit=0, balloon=b, tick=t) for b in hit)
        fields = (field,)
        scores = (score,)
    else:
        ball = None
        fields_out = []
        scores_out = []
        for i, avatar in enumerate(avatars):
            field = state.fields[i]
            score = state.scores[i]
            points, field, hit = check_collection(
                field,
                state.avatars[i].x,
                avatar.x,
                z_prev,
                z_now,
                config.collection_radius_solo,
                config,
            )
            score += points
            events.extend(CollectionEvent(unit=i, balloon=b, tick=t) for b in hit)
            fields_out.append(field)
            scores_out.append(score)
        fields = tuple(fields_out)
        scores = tuple(scores_out)

    return TrialState(
        mode=state.mode,
        tick=t + 1,
        avatars=tuple(avatars),
        fields=fields,
        scores=scores,
        noises=noises,
        ball=ball,
        events=tuple(events),
    )
