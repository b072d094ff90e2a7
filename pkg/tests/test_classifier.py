from dataclasses import replace

import numpy as np
import pytest

from eogpipe.calibration import CalibrationProfile
from eogpipe.classifier import Mode, ThresholdClassifier, classify_sample, classify_stream
from eogpipe.errors import ProcessingError
from eogpipe.evaluate import evaluate
from eogpipe.model import MovementKind as K, SessionRecording
from eogpipe.pipeline import filter_session
from eogpipe.synth import ScenarioSpec, synth_session

from oracles import active_masked_oracle, scan_events
from scenarios import random_scenario

PROFILE = CalibrationProfile(
    neutral_mean_h=0.0, neutral_mean_v=0.0, left=-1.0, right=1.0, up=1.0, down=-1.0, blink=2.0
)


def session_of(h=None, v=None, n=None, fs=250.0):
    n = n or len(h if h is not None else v)
    h = np.zeros(n) if h is None else np.asarray(h, float)
    v = np.zeros(n) if v is None else np.asarray(v, float)
    return SessionRecording.from_channels(fs, h, v)


def pulse(n, start, width, amp=2.0):
    x = np.zeros(n)
    x[start : start + width] = amp
    return x


def same_events(a, b, fs):
    assert [e.kind for e in a] == [e.kind for e in b]
    for x, y in zip(a, b):
        assert abs(x.onset - y.onset) <= 1.0 / fs + 1e-9


class TestClassifySample:
    def test_neutral(self):
        assert classify_sample(0.0, 0.0, PROFILE) is K.NEUTRAL

    def test_single_channel(self):
        assert classify_sample(-1.5, 0.0, PROFILE) is K.LEFT
        assert classify_sample(1.5, 0.0, PROFILE) is K.RIGHT
        assert classify_sample(0.0, -1.5, PROFILE) is K.DOWN
        assert classify_sample(0.0, 1.5, PROFILE) is K.BLINK  # up/blink split comes later

    def test_threshold_itself_is_not_a_crossing(self):
        assert classify_sample(1.0, 0.0, PROFILE) is K.NEUTRAL

    def test_larger_normalized_excursion_wins(self):
        assert classify_sample(1.2, 1.1, PROFILE) is K.RIGHT
        assert classify_sample(1.1, -1.2, PROFILE) is K.DOWN

    def test_exact_tie_goes_horizontal(self):
        assert classify_sample(-1.5, 1.5, PROFILE) is K.LEFT

    def test_normalization_uses_offsets(self):
        p = replace(PROFILE, neutral_mean_h=0.5, right=1.0)
        # horizontal excursion (1.0 - 0.5) / 0.5 = 1.0 is not a crossing; 1.3 gives 1.6 vs 1.5
        assert classify_sample(1.3, 1.5, p) is K.RIGHT
        assert classify_sample(1.2, 1.5, p) is K.BLINK


class TestRules:
    def test_all_neutral(self):
        assert classify_stream(session_of(n=1000), PROFILE) == []

    def test_single_right_plateau(self, clean_profile, run_filter):
        raw = synth_session(ScenarioSpec(duration=4.0, events=[(K.RIGHT, 1.0)]))
        s = filter_session(raw, run_filter)
        events = classify_stream(s, clean_profile)
        assert [e.kind for e in events] == [K.RIGHT]
        above = s.h > clean_profile.right
        span = np.count_nonzero(above) / s.fs
        # exactly one contiguous run
        assert np.count_nonzero(np.diff(above.astype(int)) == 1) == 1
        assert abs(events[0].duration - span) <= 2 / s.fs

    def test_two_blinks_merge(self, clean_profile, run_filter):
        raw = synth_session(ScenarioSpec(duration=4.0, events=[(K.DOUBLE_BLINK, 1.0)]))
        events = classify_stream(filter_session(raw, run_filter), clean_profile)
        assert [e.kind for e in events] == [K.DOUBLE_BLINK]
        assert events[0].onset == pytest.approx(1.0, abs=0.05)

    def test_blinks_too_far_apart_stay_single(self):
        n = 1000
        v = pulse(n, 100, 30) + pulse(n, 100 + 200, 30)  # 0.8 s apart, window is 0.5 s
        events = classify_stream(session_of(v=v), PROFILE)
        assert [e.kind for e in events] == [K.BLINK, K.BLINK]

    def test_up_blink_split_by_duration(self):
        n = 1000
        assert [e.kind for e in classify_stream(session_of(v=pulse(n, 100, 150)), PROFILE)] == [K.UP]
        assert [e.kind for e in classify_stream(session_of(v=pulse(n, 100, 50)), PROFILE)] == [K.BLINK]
        # 0.4 s lies between blink_max_dur and long_blink_min_dur
        assert classify_stream(session_of(v=pulse(n, 100, 100)), PROFILE) == []

    def test_hold_time(self):
        n = 500
        assert classify_stream(session_of(h=pulse(n, 100, 19)), PROFILE) == []
        events = classify_stream(session_of(h=pulse(n, 100, 20)), PROFILE)
        assert [e.kind for e in events] == [K.RIGHT]
        assert events[0].duration == pytest.approx(0.08)

    def test_refractory_suppresses_follow_up(self):
        n = 1000
        h = pulse(n, 100, 30) + pulse(n, 130 + 30, 30, amp=-2.0)  # Left starts 120 ms after Right ends
        events = classify_stream(session_of(h=h), PROFILE)
        assert [e.kind for e in events] == [K.RIGHT]
        h = pulse(n, 100, 30) + pulse(n, 130 + 50, 30, amp=-2.0)  # 200 ms later: allowed
        assert [e.kind for e in classify_stream(session_of(h=h), PROFILE)] == [K.RIGHT, K.LEFT]

    def test_event_fields(self):
        n = 500
        h = pulse(n, 100, 40, amp=-3.0)
        h[120] = -4.0
        (ev,) = classify_stream(session_of(h=h), PROFILE)
        assert ev.kind is K.LEFT
        assert ev.onset == pytest.approx(100 / 250)
        assert ev.duration == pytest.approx(40 / 250)
        assert ev.peak == -4.0

    def test_stream_end_flushes(self):
        n = 200
        events = classify_stream(session_of(v=pulse(n, 150, 50)), PROFILE)
        assert [e.kind for e in events] == [K.BLINK]

    def test_nan_rejected(self):
        h = np.zeros(50)
        h[13] = np.nan
        with pytest.raises(ProcessingError) as exc:
            classify_stream(SessionRecording(250.0, np.arange(50) / 250, h, np.zeros(50)), PROFILE)
        assert exc.value.index == 13

    def test_deterministic(self, clean_sweep, clean_profile):
        assert classify_stream(clean_sweep, clean_profile) == classify_stream(clean_sweep, clean_profile)


class TestActivation:
    def test_deactivate_mid_candidate(self):
        n = 500
        clf = ThresholdClassifier(PROFILE, 250.0)
        h = pulse(n, 100, 60)
        out = []
        for i, x in enumerate(h):
            if i == 130:
                assert clf.mode is Mode.CANDIDATE
                clf.set_active(False)
                assert clf.mode is Mode.IDLE
            out += clf.feed(x, 0.0, i / 250)
        out += clf.flush()
        assert out == []

    def test_activate_is_idempotent(self):
        clf = ThresholdClassifier(PROFILE, 250.0)
        clf.feed(2.0, 0.0, 0.0)
        clf.set_active(True)
        assert clf.mode is Mode.CANDIDATE

    def test_suppressed_span_yields_nothing(self):
        n = 1000
        h = pulse(n, 300, 150)
        active = np.ones(n, dtype=bool)
        active[250:500] = False
        s = session_of(h=h)
        assert classify_stream(s, PROFILE, active=active) == []
        assert classify_stream(s, PROFILE, active=active) == active_masked_oracle(s, PROFILE, active)

    def test_reactivation_mid_plateau_matches_masked_oracle(self):
        n = 1000
        h = pulse(n, 300, 150) + pulse(n, 700, 40, amp=-2)
        active = np.ones(n, dtype=bool)
        active[250:350] = False
        s = session_of(h=h)
        got = classify_stream(s, PROFILE, active=active)
        assert [e.kind for e in got] == [K.RIGHT, K.LEFT]
        assert got[0].onset == pytest.approx(350 / 250)
        assert got == active_masked_oracle(s, PROFILE, active)

    def test_pending_blink_dropped_on_deactivation(self):
        n = 1000
        v = pulse(n, 100, 30)
        active = np.ones(n, dtype=bool)
        active[200:] = False
        assert classify_stream(session_of(v=v), PROFILE, active=active) == []

    def test_random_masks_match_oracle(self, clean_profile):
        for seed in range(20):
            s, p = random_scenario(seed)
            rng = np.random.default_rng(seed)
            active = np.ones(len(s), dtype=bool)
            for _ in range(3):
                a = int(rng.integers(0, len(s)))
                active[a : a + int(rng.integers(10, 400))] = False
            got = classify_stream(s, p, active=active)
            want = active_masked_oracle(s, p, active)
            same_events(got, want, s.fs)


def test_chunked_feeding_matches_whole_stream(clean_sweep, clean_profile):
    whole = classify_stream(clean_sweep, clean_profile)
    clf = ThresholdClassifier(clean_profile, clean_sweep.fs)
    got = []
    for a in range(0, len(clean_sweep), 333):
        sl = slice(a, a + 333)
        got += clf.process(clean_sweep.h[sl], clean_sweep.v[sl], clean_sweep.t[sl])
    got += clf.flush()
    assert got == whole


@pytest.mark.parametrize("block", range(4))
def test_matches_scan_oracle(block):
    """200 randomized noise-free scenarios, 50 per block."""
    for seed in range(block * 50, block * 50 + 50):
        s, p = random_scenario(seed)
        got = classify_stream(s, p)
        want = scan_events(s, p)
        same_events(got, want, s.fs)


@pytest.mark.parametrize("seed", range(30))
def test_event_invariants(seed):
    s, p = random_scenario(seed)
    events = classify_stream(s, p)
    for e in events:
        assert e.kind is not K.NEUTRAL and e.duration > 0
        if e.kind is not K.DOUBLE_BLINK:
            assert e.duration >= p.min_hold - 1e-9
    for a, b in zip(events, events[1:]):
        assert b.onset > a.onset
        assert b.onset - a.end >= p.refractory - 1 / s.fs - 1e-9


def test_larger_amplitudes_never_lose_events(clean_profile, run_filter):
    rng = np.random.default_rng(3)
    for trial in range(10):
        from eogpipe.synth import random_event_plan

        plan = random_event_plan(12, seed=trial)
        spec = ScenarioSpec(duration=plan[-1][1] + 2, events=plan)
        base = filter_session(synth_session(spec), run_filter)
        found = evaluate(classify_stream(base, clean_profile), base.labels)
        for c in rng.uniform(1.0, 2.0, size=3):
            louder = filter_session(synth_session(spec.scaled(float(c))), run_filter)
            cm = evaluate(classify_stream(louder, clean_profile), louder.labels)
            for kind, row in found.counts.items():
                assert cm.counts[kind][kind] >= row[kind]
