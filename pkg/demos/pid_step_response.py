"""Single-joint effort PID step response with the course gains.

Drives the 1 kg*m^2, 1 N*m*s joint through a 0.5 rad step using
p=100, i=0.01, d=10 at 1 kHz and prints the trajectory as a coarse
ASCII plot plus the usual step-response numbers.
Run: python3 demos/pid_step_response.py
"""

from armsim import JointSimState, PidGains, PidState, joint_step, pid_step

GAINS = PidGains(p=100.0, i=0.01, d=10.0)
TARGET = 0.5
DT = 1e-3
LIMITS = (-3.14, 3.14)


def main():
    pid = PidState.for_effort_limit(GAINS, effort_limit=1000.0)
    state = JointSimState(q=0.0, qd=0.0, inertia=1.0, damping=1.0)

    history = []
    settle, peak, peak_t = None, 0.0, 0.0
    for k in range(1, 2001):
        effort = pid_step(GAINS, pid, TARGET - state.q, DT)
        state = joint_step(state, effort, 1000.0, LIMITS, DT)
        t = k * DT
        history.append(state.q)
        if state.q > peak:
            peak, peak_t = state.q, t
        if abs(TARGET - state.q) < 0.01:
            if settle is None:
                settle = t
        else:
            settle = None

    print("0.5 rad step, course gains p=100 i=0.01 d=10, dt=1 ms")
    print()
    rows = 12
    cols = 72
    stride = len(history) // cols
    samples = history[::stride][:cols]
    top = max(max(samples), TARGET) * 1.05
    for r in range(rows, -1, -1):
        level = top * r / rows
        line = "".join("#" if q >= level else " " for q in samples)
        marker = "<- target" if abs(level - TARGET) <= top / (2 * rows) else ""
        print(f"{level:5.2f} |{line}| {marker}")
    print("      +" + "-" * cols + "+")
    print(f"       0 s{'':{cols - 14}}{len(history) * DT:.1f} s")
    print()

    rise = next(k for k, q in enumerate(history, 1) if q >= 0.9 * TARGET) * DT
    print(f"rise time to 90%:   {rise:.3f} s")
    print(f"peak:               {peak:.4f} rad at {peak_t:.3f} s "
          f"({100 * (peak - TARGET) / TARGET:.1f}% overshoot)")
    print(f"settles in +-0.01:  {settle:.3f} s (stays inside afterwards)")
    print(f"final position:     {history[-1]:.4f} rad")


if __name__ == "__main__":
    main()
