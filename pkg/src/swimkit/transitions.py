"""The six-class swimmer state machine.

A race, as seen by a per-frame annotator, moves through:

    on_blocks -> diving -> underwater -> swimming <-> turning ... -> finishing

with two shortcut edges for swimmers who fail to fully submerge (diving or
turning straight into swimming). Staying in the same class across consecutive
frames is always legal: annotation is per-frame, so every class carries a
self-loop. On-blocks can only ever open a track and finishing can only ever
close one.
"""

from __future__ import annotations

from .model import SwimmerClass, Track, Violation

_CROSS_EDGES: frozenset[tuple[SwimmerClass, SwimmerClass]] = frozenset(
    {
        (SwimmerClass.ON_BLOCKS, SwimmerClass.DIVING),
        (SwimmerClass.DIVING, SwimmerClass.UNDERWATER),
        # failed submersion off the dive: skip underwater entirely
        (SwimmerClass.DIVING, SwimmerClass.SWIMMING),
        (SwimmerClass.UNDERWATER, SwimmerClass.SWIMMING),
        (SwimmerClass.SWIMMING, SwimmerClass.TURNING),
        (SwimmerClass.SWIMMING, SwimmerClass.FINISHING),
        (SwimmerClass.TURNING, SwimmerClass.UNDERWATER),
        # failed submersion off the wall: skip underwater entirely
        (SwimmerClass.TURNING, SwimmerClass.SWIMMING),
    }
)

LEGAL_TRANSITIONS: frozenset[tuple[SwimmerClass, SwimmerClass]] = frozenset(
    {(c, c) for c in SwimmerClass} | _CROSS_EDGES
)


def is_legal_transition(from_class: SwimmerClass, to_class: SwimmerClass) -> bool:
    """True iff a swimmer may be ``to_class`` in the frame after ``from_class``."""
    return (from_class, to_class) in LEGAL_TRANSITIONS


def legal_next_classes(prev: SwimmerClass | None) -> set[SwimmerClass]:
    """Classes a track may take next, given its most recent observation.

    ``prev=None`` means a brand-new track with no history: every class is
    possible (the service narrows this to on-blocks for frames before the
    race start).
    """
    if prev is None:
        return set(SwimmerClass)
    return {c for c in SwimmerClass if is_legal_transition(prev, c)}


def validate_track(track: Track) -> list[Violation]:
    """Check a track's class sequence against the state machine.

    Returns one violation per offending consecutive pair, plus positional
    violations when on-blocks appears anywhere but a prefix or finishing
    anywhere but a suffix.

    Raises:
        ValueError: if the track has no observations.
    """
    if not track.observations:
        raise ValueError("empty track")

    violations = []
    obs = list(track.observations)

    for (idx_a, cls_a), (idx_b, cls_b) in zip(obs, obs[1:]):
        if idx_b <= idx_a:
            violations.append(
                Violation(
                    "non_increasing_frame_index",
                    f"frame index {idx_b} does not increase after {idx_a}",
                    track_id=track.track_id,
                    frame_indices=(idx_a, idx_b),
                )
            )
        if not is_legal_transition(cls_a, cls_b):
            violations.append(
                Violation(
                    "illegal_transition",
                    f"illegal transition {cls_a.value} -> {cls_b.value} "
                    f"between frames {idx_a} and {idx_b}",
                    track_id=track.track_id,
                    frame_indices=(idx_a, idx_b),
                    classes=(cls_a, cls_b),
                )
            )

    # The pairwise check already rejects re-entering on_blocks or leaving
    # finishing, but only for *adjacent* pairs; scan positions so that a track
    # whose first pair is already broken still reports the positional rules.
    classes = [cls for _, cls in obs]
    for i, cls in enumerate(classes):
        if cls is SwimmerClass.ON_BLOCKS and any(
            c is not SwimmerClass.ON_BLOCKS for c in classes[:i]
        ):
            violations.append(
                Violation(
                    "on_blocks_not_first",
                    f"on_blocks at frame {obs[i][0]} after the track left the blocks",
                    track_id=track.track_id,
                    frame_indices=(obs[i - 1][0], obs[i][0]),
                    classes=(classes[i - 1], cls),
                )
            )
        if cls is SwimmerClass.FINISHING and any(
            c is not SwimmerClass.FINISHING for c in classes[i:]
        ):
            violations.append(
                Violation(
                    "finishing_not_last",
                    f"classes follow finishing at frame {obs[i][0]}",
                    track_id=track.track_id,
                    frame_indices=(obs[i][0], obs[i + 1][0]),
                    classes=(cls, classes[i + 1]),
                )
            )

    # one violation per offence: drop positional duplicates of pair violations
    seen = set()
    unique = []
    for v in violations:
        key = (v.frame_indices, v.code)
        if key not in seen:
            seen.add(key)
            unique.append(v)
    return unique
