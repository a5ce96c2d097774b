"""Pub/sub bus: naming, kind safety, FIFO drains, fan-out, no latching."""

import math
import threading

import numpy as np
import pytest

from armsim import (
    BadName,
    Bus,
    InvalidMessage,
    JointStateMsg,
    KindMismatch,
    MessageKind,
    ScalarCommand,
    advertise,
    publish,
    subscribe,
)


def state_msg(t, q=(0.0,)):
    names = tuple(f"j{i}" for i in range(len(q)))
    zeros = tuple(0.0 for _ in q)
    return JointStateMsg(t=t, names=names, q=tuple(q), qd=zeros, effort=zeros)


def test_advertise_subscribe_publish_roundtrip():
    bus = Bus()
    pub = advertise(bus, "/arm/cmd", MessageKind.SCALAR_COMMAND)
    sub = subscribe(bus, "/arm/cmd", MessageKind.SCALAR_COMMAND)
    assert publish(pub, ScalarCommand(0.25)) == 1
    assert sub.drain() == [ScalarCommand(0.25)]
    assert sub.drain() == []


def test_topic_names_must_be_slash_rooted():
    bus = Bus()
    for bad in ("cmd", "", "arm/cmd"):
        with pytest.raises(BadName):
            bus.advertise(bad, MessageKind.SCALAR_COMMAND)
        with pytest.raises(BadName):
            bus.subscribe(bad, MessageKind.SCALAR_COMMAND)


def test_topic_kind_is_sticky():
    bus = Bus()
    bus.advertise("/t", MessageKind.SCALAR_COMMAND)
    with pytest.raises(KindMismatch):
        bus.advertise("/t", MessageKind.JOINT_STATE)
    with pytest.raises(KindMismatch):
        bus.subscribe("/t", MessageKind.JOINT_STATE)
    assert bus.topic_kind("/t") is MessageKind.SCALAR_COMMAND
    assert bus.topic_kind("/absent") is None


def test_publish_checks_message_type_against_topic():
    bus = Bus()
    pub = bus.advertise("/t", MessageKind.SCALAR_COMMAND)
    bus.subscribe("/t", MessageKind.SCALAR_COMMAND)
    with pytest.raises(KindMismatch):
        pub.publish(state_msg(0.0))


def test_no_latching_for_late_subscribers():
    bus = Bus()
    pub = bus.advertise("/t", MessageKind.SCALAR_COMMAND)
    assert pub.publish(ScalarCommand(1.0)) == 0  # nobody listening yet
    sub = bus.subscribe("/t", MessageKind.SCALAR_COMMAND)
    pub.publish(ScalarCommand(2.0))
    assert sub.drain() == [ScalarCommand(2.0)]


def test_fifo_order_within_a_subscription():
    bus = Bus()
    pub = bus.advertise("/t", MessageKind.SCALAR_COMMAND)
    sub = bus.subscribe("/t", MessageKind.SCALAR_COMMAND)
    for v in (1.0, 2.0, 3.0):
        pub.publish(ScalarCommand(v))
    assert [m.value for m in sub.drain()] == [1.0, 2.0, 3.0]


def test_fanout_reaches_every_live_subscription_once():
    bus = Bus()
    pub = bus.advertise("/t", MessageKind.SCALAR_COMMAND)
    subs = [bus.subscribe("/t", MessageKind.SCALAR_COMMAND) for _ in range(3)]
    assert pub.publish(ScalarCommand(5.0)) == 3
    for sub in subs:
        assert [m.value for m in sub.drain()] == [5.0]
    subs[1].close()
    assert pub.publish(ScalarCommand(6.0)) == 2
    assert subs[1].drain() == []
    assert [m.value for m in subs[0].drain()] == [6.0]


def test_pending_counts_without_draining():
    bus = Bus()
    pub = bus.advertise("/t", MessageKind.SCALAR_COMMAND)
    sub = bus.subscribe("/t", MessageKind.SCALAR_COMMAND)
    pub.publish(ScalarCommand(1.0))
    pub.publish(ScalarCommand(2.0))
    assert sub.pending() == 2
    sub.drain()
    assert sub.pending() == 0


def test_invalid_messages_are_rejected():
    bus = Bus()
    cmd = bus.advertise("/c", MessageKind.SCALAR_COMMAND)
    with pytest.raises(InvalidMessage):
        cmd.publish(ScalarCommand(math.nan))
    with pytest.raises(InvalidMessage):
        cmd.publish(ScalarCommand(math.inf))

    states = bus.advertise("/s", MessageKind.JOINT_STATE)
    ragged = JointStateMsg(t=0.0, names=("a", "b"), q=(0.0,), qd=(0.0, 0.0),
                           effort=(0.0, 0.0))
    with pytest.raises(InvalidMessage):
        states.publish(ragged)


def test_time_must_not_go_backwards_per_topic():
    bus = Bus()
    pub = bus.advertise("/s", MessageKind.JOINT_STATE)
    pub.publish(state_msg(0.1))
    pub.publish(state_msg(0.1))  # equal is fine
    with pytest.raises(InvalidMessage):
        pub.publish(state_msg(0.05))
    # other topics keep their own clock
    other = bus.advertise("/s2", MessageKind.JOINT_STATE)
    other.publish(state_msg(0.01))


def test_randomized_interleavings_match_queue_model():
    rng = np.random.RandomState(42)
    for _ in range(200):
        bus = Bus()
        pub = bus.advertise("/t", MessageKind.SCALAR_COMMAND)
        live = {}  # sub -> expected queue
        counter = 0
        for _ in range(rng.randint(3, 20)):
            op = rng.randint(3)
            if op == 0:
                msg = ScalarCommand(float(counter))
                counter += 1
                assert pub.publish(msg) == len(live)
                for queue in live.values():
                    queue.append(msg)
            elif op == 1:
                live[bus.subscribe("/t", MessageKind.SCALAR_COMMAND)] = []
            elif live:
                sub = list(live)[rng.randint(len(live))]
                assert sub.drain() == live[sub]
                live[sub] = []
        for sub, queue in live.items():
            assert sub.drain() == queue


def test_concurrent_publishers_preserve_per_thread_order():
    bus = Bus()
    pub = bus.advertise("/t", MessageKind.SCALAR_COMMAND)
    sub = bus.subscribe("/t", MessageKind.SCALAR_COMMAND)

    def worker(base):
        mine = bus.advertise("/t", MessageKind.SCALAR_COMMAND)
        for k in range(500):
            mine.publish(ScalarCommand(float(base + k)))

    threads = [threading.Thread(target=worker, args=(b,)) for b in (0, 10_000)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    values = [m.value for m in sub.drain()]
    assert len(values) == 1000
    for base in (0, 10_000):
        lane = [v for v in values if base <= v < base + 500]
        assert lane == sorted(lane) and len(lane) == 500
    assert pub.publish(ScalarCommand(1.0)) == 1
