"""Tour of the in-process pub/sub bus.

Walks through topic creation, kind safety, FIFO drains, fan-out and the
no-latching rule with printed results at each step.
Run: python3 demos/bus_tour.py
"""

from armsim import (
    Bus,
    InvalidMessage,
    KindMismatch,
    MessageKind,
    ScalarCommand,
    advertise,
    publish,
    subscribe,
)


def main():
    bus = Bus()
    pub = advertise(bus, "/plant/elbow/command", MessageKind.SCALAR_COMMAND)
    print("advertised /plant/elbow/command as", bus.topic_kind(
        "/plant/elbow/command").value)

    delivered = publish(pub, ScalarCommand(0.5))
    print(f"published 0.5 before anyone subscribed: reached {delivered} queues")

    sub = subscribe(bus, "/plant/elbow/command", MessageKind.SCALAR_COMMAND)
    print("subscribed; no latching means the queue starts empty:", sub.drain())

    for value in (0.1, 0.2, 0.3):
        publish(pub, ScalarCommand(value))
    print("published 0.1, 0.2, 0.3; drain preserves FIFO order:",
          [m.value for m in sub.drain()])

    second = subscribe(bus, "/plant/elbow/command", MessageKind.SCALAR_COMMAND)
    delivered = publish(pub, ScalarCommand(0.9))
    print(f"with two subscriptions a publish reports {delivered} deliveries")
    print("  first drained:", [m.value for m in sub.drain()])
    print("  second drained:", [m.value for m in second.drain()])

    second.close()
    delivered = publish(pub, ScalarCommand(1.0))
    print(f"after closing one, publish reaches {delivered};"
          f" the closed queue stays empty: {second.drain()}")

    try:
        subscribe(bus, "/plant/elbow/command", MessageKind.JOINT_STATE)
    except KindMismatch as exc:
        print("kind safety:", exc)

    try:
        publish(pub, ScalarCommand(float("nan")))
    except InvalidMessage as exc:
        print("message hygiene:", exc)


if __name__ == "__main__":
    main()
