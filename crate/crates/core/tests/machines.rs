use halfcycle_core::{build_alpha_cycle, library, run, verify_cycle, Alpha, CycleSource, ResultValue, TmSpec};

fn incremented(word: &str) -> String {
    let n = u64::from_str_radix(word, 2).unwrap() + 1;
    let s = format!("{n:b}");
    // the machine keeps the input width unless the carry runs off the left end
    format!("{s:0>width$}", width = word.len())
}

#[test]
fn incrementer_matches_arithmetic() {
    let m = library::binary_incrementer();
    for n in 0u64..64 {
        let word = format!("{n:b}");
        let trace = run(&m, &m.load(&word).unwrap(), 1000).unwrap();
        assert!(trace.halted);
        let got = trace.result.unwrap();
        assert_eq!(got, ResultValue::result(incremented(&word)), "input {word}");
    }
}

#[test]
fn every_halting_run_yields_a_verified_cycle() {
    let cases = [
        (library::binary_incrementer(), vec!["0", "1", "1011", "1111"]),
        (library::unary_successor(), vec!["", "1", "11111"]),
        (library::parity_checker(), vec!["", "0", "101", "111"]),
    ];
    for (m, inputs) in cases {
        for input in inputs {
            let trace = run(&m, &m.load(input).unwrap(), 10_000).unwrap();
            for alpha in [Alpha::new(1, 3), Alpha::new(1, 2), Alpha::new(9, 10)] {
                let source = CycleSource::Machine { machine: m.name().into(), input: input.into() };
                let cycle = build_alpha_cycle(&trace, alpha, source).unwrap();
                let report = verify_cycle(&cycle, Some(&m));
                assert!(report.passed(), "{} on {input:?}: {:?}", m.name(), report.violations);
                assert!(cycle.alpha_actual() >= alpha);
            }
        }
    }
}

#[test]
fn loop_machine_exhausts_any_budget() {
    let m = library::infinite_loop();
    for budget in [1, 10, 1000] {
        let trace = run(&m, &m.load("").unwrap(), budget).unwrap();
        assert!(!trace.halted);
        assert_eq!(trace.step_count(), budget);
    }
}

#[test]
fn shipped_files_round_trip() {
    for m in library::all() {
        let text = serde_json::to_string(&m.to_file()).unwrap();
        let again = TmSpec::from_json(&text).unwrap();
        assert_eq!(again, m);
        assert_eq!(library::by_name(m.name()).unwrap(), m);
    }
}
