"""In-process publish/subscribe topic graph.

Slash-named topics carry exactly one message kind each. Delivery is
pull-model: subscribers drain their own FIFO queue when they choose,
which keeps the simulation loop deterministic. No latching: a
subscription only sees messages published after it was created.
"""

from __future__ import annotations

import enum
import math
import threading
from collections import deque
from dataclasses import dataclass, field


class BusError(Exception):
    """Base class for topic-graph failures."""


class BadName(BusError):
    """Topic name is empty or does not start with '/'."""


class KindMismatch(BusError):
    """Topic already carries a different message kind."""


class InvalidMessage(BusError):
    """Message violates its kind's invariants (NaN, ragged lists, time going backwards)."""


class MessageKind(enum.Enum):
    SCALAR_COMMAND = "ScalarCommand"
    JOINT_STATE = "JointStateMsg"
    MODEL_DESCRIPTION = "ModelDescription"


@dataclass(frozen=True)
class ScalarCommand:
    value: float


@dataclass(frozen=True)
class JointStateMsg:
    t: float
    names: tuple[str, ...]
    q: tuple[float, ...]
    qd: tuple[float, ...]
    effort: tuple[float, ...]


@dataclass(frozen=True)
class ModelDescription:
    """Opaque model payload for the serve bridge; the bus does not inspect it."""

    data: dict = field(hash=False)


_KIND_OF_TYPE = {
    ScalarCommand: MessageKind.SCALAR_COMMAND,
    JointStateMsg: MessageKind.JOINT_STATE,
    ModelDescription: MessageKind.MODEL_DESCRIPTION,
}


def _check_message(message) -> MessageKind:
    kind = _KIND_OF_TYPE.get(type(message))
    if kind is None:
        raise InvalidMessage(f"unknown message type {type(message).__name__}")
    if kind is MessageKind.SCALAR_COMMAND:
        if not math.isfinite(message.value):
            raise InvalidMessage(f"command value must be finite, got {message.value}")
    elif kind is MessageKind.JOINT_STATE:
        n = len(message.names)
        if not (len(message.q) == len(message.qd) == len(message.effort) == n):
            raise InvalidMessage("joint-state lists must all have the same length")
        if not math.isfinite(message.t):
            raise InvalidMessage("joint-state time must be finite")
    return kind


class Subscription:
    """A drainable FIFO of messages published after this subscription existed."""

    def __init__(self, topic: "_Topic"):
        self._topic = topic
        self._queue: deque = deque()
        self._closed = False

    def drain(self) -> list:
        """Remove and return all queued messages, oldest first."""
        with self._topic.bus._lock:
            items = list(self._queue)
            self._queue.clear()
        return items

    def pending(self) -> int:
        with self._topic.bus._lock:
            return len(self._queue)

    def close(self) -> None:
        with self._topic.bus._lock:
            if not self._closed:
                self._topic.subscriptions.remove(self)
                self._closed = True


class Publisher:
    def __init__(self, topic: "_Topic"):
        self._topic = topic

    @property
    def topic_name(self) -> str:
        return self._topic.name

    def publish(self, message) -> int:
        """Append to every live subscription; returns how many were reached."""
        kind = _check_message(message)
        topic = self._topic
        if kind is not topic.kind:
            raise KindMismatch(f"topic '{topic.name}' carries {topic.kind.value}, "
                               f"not {kind.value}")
        with topic.bus._lock:
            if kind is MessageKind.JOINT_STATE:
                if topic.last_t is not None and message.t < topic.last_t:
                    raise InvalidMessage(
                        f"joint-state time went backwards on '{topic.name}' "
                        f"({message.t} < {topic.last_t})")
                topic.last_t = message.t
            for sub in topic.subscriptions:
                sub._queue.append(message)
            return len(topic.subscriptions)


class _Topic:
    def __init__(self, bus: "Bus", name: str, kind: MessageKind):
        self.bus = bus
        self.name = name
        self.kind = kind
        self.subscriptions: list[Subscription] = []
        self.last_t: float | None = None


class Bus:
    """Topic registry; safe to publish and drain from multiple threads."""

    def __init__(self):
        self._topics: dict[str, _Topic] = {}
        self._lock = threading.Lock()

    def _topic(self, name: str, kind: MessageKind) -> _Topic:
        if not name or not name.startswith("/"):
            raise BadName(f"topic name must be non-empty and start with '/': {name!r}")
        with self._lock:
            topic = self._topics.get(name)
            if topic is None:
                topic = _Topic(self, name, kind)
                self._topics[name] = topic
            elif topic.kind is not kind:
                raise KindMismatch(f"topic '{name}' carries {topic.kind.value}, "
                                   f"not {kind.value}")
            return topic

    def advertise(self, topic_name: str, kind: MessageKind) -> Publisher:
        return Publisher(self._topic(topic_name, kind))

    def subscribe(self, topic_name: str, kind: MessageKind) -> Subscription:
        topic = self._topic(topic_name, kind)
        sub = Subscription(topic)
        with self._lock:
            topic.subscriptions.append(sub)
        return sub

    def topic_names(self) -> list[str]:
        with self._lock:
            return sorted(self._topics)

    def topic_kind(self, name: str) -> MessageKind | None:
        with self._lock:
            topic = self._topics.get(name)
            return None if topic is None else topic.kind


def advertise(bus: Bus, topic_name: str, kind: MessageKind) -> Publisher:
    """Register intent to publish on a topic, creating it if needed."""
    return bus.advertise(topic_name, kind)


def subscribe(bus: Bus, topic_name: str, kind: MessageKind) -> Subscription:
    """Open a FIFO of future messages on a topic, creating it if needed."""
    return bus.subscribe(topic_name, kind)


def publish(pub: Publisher, message) -> int:
    """Deliver one message to every current subscriber; returns the count."""
    return pub.publish(message)
