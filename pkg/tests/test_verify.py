from duke.verify import PropertyStat, VerifySummary, parallel_suite, pq_suite, run_full, bounds_suite


def test_theorem_suite_small():
    summary = bounds_suite(trials=15, seed=0)
    assert summary.passed
    names = {s.name for s in summary.stats}
    assert "objective_within_3x_at_opt_radius" in names
    assert "radius_bracket_holds" in names
    assert summary.total_checks > 0


def test_pq_suite_small():
    summary = pq_suite(instances=40, seed=1)
    assert summary.passed
    assert summary.total_checks >= 40


def test_parallel_suite_small():
    summary = parallel_suite(trials=6, seed=2)
    assert summary.passed


def test_zero_trials_is_vacuous_pass():
    summary = run_full(trials=0, pq_instances=0, parallel_trials=0)
    assert summary.passed
    assert summary.all_violations() == []


def test_violations_carry_replay_detail():
    summary = VerifySummary()
    stat = summary.stat("demo")
    stat.record(True, 0.5, "fine")
    stat.record(False, 2.0, "instance-repr-here")
    assert not summary.passed
    assert stat.checks == 2
    assert stat.worst == 2.0
    assert summary.all_violations() == ["instance-repr-here"]
    assert isinstance(stat, PropertyStat)


def test_merge_combines_sections():
    a = VerifySummary()
    a.stat("one").record(True, 1.0, "")
    b = VerifySummary()
    b.stat("two").record(True, 1.0, "")
    merged = a.merge(b)
    assert {s.name for s in merged.stats} == {"one", "two"}
    assert merged.total_checks == 2
