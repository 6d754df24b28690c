"""JSON encoding of instances and schedules.

Rationals travel as strings, either ``"3"`` or ``"7/2"``; JSON floats are
rejected because they cannot be read back exactly.
"""
from __future__ import annotations

import json

from .errors import ValidationError
from .model import Instance, Schedule, normalize, rational


def _no_floats(token):
    raise ValidationError(
        f"floats not accepted ({token}); exact rationals are required, write e.g. \"3/2\""
    )


def _load(text):
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ValidationError(f"input is not UTF-8: {exc}") from exc
    try:
        return json.loads(text, parse_float=_no_floats)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed JSON: {exc}") from exc


def parse_instance(text) -> Instance:
    """Read ``{"jobs": [...], "speeds": [...]}`` and return the normalised instance."""
    data = _load(text)
    if not isinstance(data, dict) or "jobs" not in data or "speeds" not in data:
        raise ValidationError('instance JSON must be an object with "jobs" and "speeds"')
    jobs, speeds = data["jobs"], data["speeds"]
    if not isinstance(jobs, list) or not isinstance(speeds, list):
        raise ValidationError('"jobs" and "speeds" must be lists')
    if not jobs:
        raise ValidationError("empty job list")
    p = [rational(v, f"job {j}") for j, v in enumerate(jobs, 1)]
    s = [rational(v, f"speed {i}") for i, v in enumerate(speeds, 1)]
    return normalize(Instance(tuple(p), tuple(s)))


def parse_schedule(text) -> Schedule:
    data = _load(text)
    if isinstance(data, dict):
        data = data.get("assignment")
    if not isinstance(data, list):
        raise ValidationError('schedule JSON must be {"assignment": [...]} or a list')
    return Schedule(tuple(data))


def instance_to_json(instance: Instance) -> dict:
    return {"jobs": [str(v) for v in instance.processing], "speeds": [str(v) for v in instance.speeds]}


def schedule_to_json(schedule: Schedule) -> dict:
    return {"assignment": list(schedule)}


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)
