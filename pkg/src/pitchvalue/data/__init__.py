from .detection import detect_counters, detect_transitions, filter_transitions_by_distance
from .io import EventList, load_events, load_tracking, write_events, write_tracking
from .records import (CounterAttack, EventRecord, SyncedEvent, TrackedPlayer, TrackingFrame,
                      TransitionEvent)
from .sync import snapshot_for_event, snapshot_from_frame, synchronize

__all__ = [
    "detect_counters", "detect_transitions", "filter_transitions_by_distance",
    "EventList", "load_events", "load_tracking", "write_events", "write_tracking",
    "CounterAttack", "EventRecord", "SyncedEvent", "TrackedPlayer", "TrackingFrame",
    "TransitionEvent", "snapshot_for_event", "snapshot_from_frame", "synchronize",
]
