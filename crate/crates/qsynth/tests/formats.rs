use proptest::prelude::*;
use qsynth::core::pmf::{gen_parametric_pmf, normalize_amplitudes};
use qsynth::core::sim::statevector;
use qsynth::core::synth::{compile, CompileOptions};
use qsynth::core::{DistributionKind, Gate, Gateset, NormalizationMode, PmfTable, QuantumCircuit};
use qsynth::{emit_qasm, parse_pmf_table, parse_qasm, serialize_pmf_table, PmfFormat, QasmError};

fn circuit_strategy() -> impl Strategy<Value = QuantumCircuit> {
    (2u32..=6).prop_flat_map(|n| {
        let angle = -10.0..10.0f64;
        let gate = prop_oneof![
            (0..n).prop_map(|qubit| Gate::H { qubit }),
            (0..n, angle.clone()).prop_map(|(qubit, theta)| Gate::Ry { qubit, theta }),
            (0..n, angle.clone(), angle.clone(), angle).prop_map(|(qubit, theta, phi, lambda)| Gate::U3 { qubit, theta, phi, lambda }),
            (0..n, 1..n).prop_map(move |(control, offset)| Gate::Cx { control, target: (control + offset) % n }),
        ];
        (Just(n), proptest::collection::vec(gate, 0..40))
            .prop_map(|(n, gates)| QuantumCircuit::from_gates(n, gates).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn emit_parse_emit_is_byte_identical(c in circuit_strategy(), measure in any::<bool>()) {
        let first = emit_qasm(&c, measure).unwrap();
        let parsed = parse_qasm(first.as_str()).unwrap();
        prop_assert_eq!(parsed.measured, measure);
        prop_assert_eq!(emit_qasm(&parsed, measure).unwrap(), first);
    }

    #[test]
    fn parsed_circuit_has_same_state(c in circuit_strategy()) {
        let parsed = parse_qasm(emit_qasm(&c, false).unwrap().as_str()).unwrap();
        let (a, b) = (statevector(&c).unwrap(), statevector(&parsed).unwrap());
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn pmf_lines_round_trip(heights in proptest::collection::vec(0.0..1e6f64, 1..64).prop_filter("mass", |h| h.iter().any(|&x| x > 0.0))) {
        let table = PmfTable::new(heights).unwrap();
        let text = serialize_pmf_table(&table);
        prop_assert_eq!(parse_pmf_table(&text, PmfFormat::Lines).unwrap(), table);
    }
}

#[test]
fn generated_binomial_file_starts_with_pascal_row() {
    let text = serialize_pmf_table(&gen_parametric_pmf(DistributionKind::Binomial, 32).unwrap());
    let head: Vec<&str> = text.lines().take(5).collect();
    assert_eq!(head, ["1", "31", "465", "4495", "31465"]);
}

#[test]
fn csv_and_lines_agree() {
    let lines = parse_pmf_table("1\n3\n3\n1\n", PmfFormat::Lines).unwrap();
    let csv = parse_pmf_table("bin,height\n0,1\n1,3\n2,3\n3,1\n", PmfFormat::Csv).unwrap();
    assert_eq!(lines, csv);
}

fn compiled(kind: DistributionKind, gateset: Gateset) -> QuantumCircuit {
    let table = gen_parametric_pmf(kind, 32).unwrap();
    let amps = normalize_amplitudes(&table, NormalizationMode::HeightsAsProbabilities).unwrap();
    compile(&amps, &CompileOptions { gateset, ..CompileOptions::default() }).unwrap()
}

#[test]
fn uniform_document() {
    let doc = emit_qasm(&compiled(DistributionKind::Uniform, Gateset::HRyCx), true).unwrap();
    let text = doc.as_str();
    assert_eq!(text.lines().filter(|l| l.starts_with("h ")).count(), 5);
    assert_eq!(text.lines().filter(|l| l.starts_with("measure ")).count(), 5);
    let parsed = parse_qasm(text).unwrap();
    assert_eq!(parsed.gates().unwrap(), (0..5).rev().map(|qubit| Gate::H { qubit }).collect::<Vec<_>>());
}

#[test]
fn single_hadamard_document() {
    let c = QuantumCircuit::from_gates(1, [Gate::H { qubit: 0 }]).unwrap();
    let text = emit_qasm(&c, true).unwrap().into_string();
    assert!(text.lines().any(|l| l == "h q[0];"));
    assert!(text.lines().any(|l| l == "measure q[0] -> c[0];"));
}

#[test]
fn compiled_circuits_round_trip_in_both_gatesets() {
    for kind in DistributionKind::ALL {
        for gateset in [Gateset::HRyCx, Gateset::U3Cx] {
            let c = compiled(kind, gateset);
            let text = emit_qasm(&c, true).unwrap();
            assert_eq!(emit_qasm(&parse_qasm(text.as_str()).unwrap(), true).unwrap(), text, "{kind} {gateset:?}");
        }
    }
}

#[test]
fn rz_is_rejected() {
    let err = parse_qasm("OPENQASM 2.0;\ninclude \"qelib1.inc\";\nqreg q[1];\ncreg c[1];\nrz(0.1) q[0];\n").unwrap_err();
    assert_eq!(err, QasmError::UnsupportedQasmFeature { line: 5, feature: "rz".into() });
}
