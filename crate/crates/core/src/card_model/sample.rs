//! A fully populated, lint-clean reference card.
//!
//! Every field of the schema holds a value here, which makes this card the
//! reference for [`completeness`](super::completeness) as well as a starting
//! point for authoring.

use std::collections::BTreeMap;

use super::*;
use crate::fmea::{FmeaLevel, FmeaRow};

fn q(text: &str) -> Quantity {
    Quantity::parse(text).expect("sample quantities are valid")
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn params(items: &[(&str, &str)]) -> BTreeMap<String, Quantity> {
    items.iter().map(|(k, v)| (k.to_string(), q(v))).collect()
}

fn doc(id: &str, title: &str, kind: DocumentKind, locator: &str) -> SupportingDocument {
    SupportingDocument { id: id.into(), title: title.into(), kind, locator: locator.into() }
}

fn fmea_row(id: &str, level: FmeaLevel, carrier: u32, mode: &str, effect: &str, s: (u32, u32, u32), m: &str) -> FmeaRow {
    FmeaRow::new(id, level, carrier, mode, effect, s, m).expect("sample scores are in range")
}

pub fn golden_card() -> ModelCard {
    let entity = EntityDetails {
        name: "Acme QPU One".into(),
        version: "1.2.0".into(),
        entity_type: EntityType::Computation,
        purpose: Statement18::new("Five-transmon superconducting processor for variational quantum simulation of small molecules"),
        developer: strings(&["Acme Quantum Ltd, Quantum Hardware Group"]),
        release_date: NaiveDate::from_ymd_opt(2025, 3, 14).unwrap(),
        supporting_documents: vec![
            doc("DOC-PUB", "Characterisation of the Acme five-transmon processor", DocumentKind::Publication, "doi:10.5555/acme.qpu1"),
            doc("DOC-CIRCUIT", "Coupling map and wiring drawing", DocumentKind::Drawing, "https://acme.example/qpu1/wiring.pdf"),
            doc("DOC-FMEA", "Two-level FMEA for QPU One", DocumentKind::Fmea, "fmea/qpu1.csv"),
            doc("DOC-AC", "Assurance case for QPU One", DocumentKind::AssuranceCase, "https://acme.example/qpu1/assurance"),
        ],
        citation: "Acme Quantum Ltd (2025). Acme QPU One, version 1.2.0.".into(),
        license: Some("CC-BY-4.0".into()),
        feedback_contact: "cards@acme.example".into(),
    };

    let use_cases = vec![
        UseCase {
            id: 1,
            statement: Statement18::new("Variational ground-state energy estimation for molecules of up to four spin orbitals"),
            taxonomy: Taxonomy {
                classification: "gate-based quantum computing".into(),
                categories: strings(&["simulation", "optimisation"]),
                family: strings(&["variational algorithms"]),
            },
            users: strings(&["Computational chemists running small benchmark molecules"]),
            classical_alternatives: strings(&["Exact diagonalisation on a laptop is faster for four orbitals"]),
            quantum_alternatives: strings(&["Trapped-ion processors with higher two-qubit fidelity"]),
            out_of_scope: strings(&["Quantum annealers, which solve a different optimisation model"]),
            limitations: vec![Limitation {
                id: "UC1-L1".into(),
                text: "Circuits deeper than 40 two-qubit layers exceed the coherence budget".into(),
            }],
        },
        UseCase {
            id: 2,
            statement: Statement18::new("Two-qubit gate benchmarking for hardware characterisation studies"),
            taxonomy: Taxonomy {
                classification: "gate-based quantum computing".into(),
                categories: strings(&["benchmarking"]),
                family: strings(&["randomized benchmarking"]),
            },
            users: strings(&["Hardware engineers qualifying a new fabrication run"]),
            classical_alternatives: strings(&["None; the task is intrinsically quantum"]),
            quantum_alternatives: strings(&["Cross-entropy benchmarking on other vendors' devices"]),
            out_of_scope: strings(&["Certification of logical qubits"]),
            limitations: vec![Limitation {
                id: "UC2-L1".into(),
                text: "Fidelity estimates assume gate-independent Markovian noise".into(),
            }],
        },
    ];

    let hardware = HardwareSpec {
        carriers: vec![
            Carrier {
                id: 1,
                name: "Q".into(),
                kind: "transmon qubit".into(),
                count: 5,
                circuit_parameters: params(&[("anharmonicity", "-340 MHz"), ("frequency", "5.1 ± 0.2 GHz")]),
            },
            Carrier {
                id: 2,
                name: "R".into(),
                kind: "readout cavity resonator".into(),
                count: 5,
                circuit_parameters: params(&[("frequency", "7.2 GHz"), ("linewidth", "1.5 MHz")]),
            },
            Carrier {
                id: 3,
                name: "C".into(),
                kind: "tunable coupler".into(),
                count: 4,
                circuit_parameters: params(&[("frequency", "6.8 GHz")]),
            },
        ],
        local_coherence: vec![
            LocalCoherence {
                carrier_ref: 1,
                description: "Superposition of the two lowest transmon levels".into(),
                states: strings(&["|0>", "|1>"]),
            },
            LocalCoherence {
                carrier_ref: 2,
                description: "Coherent states used for dispersive readout".into(),
                states: strings(&["|alpha>"]),
            },
        ],
        nonlocal_coherence: vec![EntanglementResource {
            id: "ENT1".into(),
            kind: EntanglementKind::Ghz,
            carrier_refs: vec![1],
            parameters: [
                ("fidelity".to_string(), QuantityOrText::classify("0.92 ± 0.01")),
                ("preparation".to_string(), QuantityOrText::classify("CNOT ladder from qubit 0")),
            ]
            .into_iter()
            .collect(),
        }],
        entanglement_strategy: "Entanglement is generated on demand by parametric two-qubit gates within each ansatz layer".into(),
        measurement: vec![Detector {
            id: "DET1".into(),
            detector_type: "dispersive readout with a parametric amplifier".into(),
            efficiency: q("0.97 ± 0.01"),
            dead_time: q("400 ns"),
            false_positive_rate: q("0.015"),
        }],
        interconnects: vec![Interconnect {
            id: "IC1".into(),
            medium: "capacitive coupling through the tunable coupler".into(),
            endpoints: [1, 3],
            parameters: params(&[("coupling", "20 MHz")]),
        }],
        control: vec![
            ControlChannel {
                carrier_ref: 1,
                mechanism: "Microwave drive lines with DRAG-shaped pulses".into(),
                decoherence_impact: "Thermal photons in the drive lines limit T2".into(),
            },
            ControlChannel {
                carrier_ref: 3,
                mechanism: "Flux bias lines".into(),
                decoherence_impact: "Low-frequency flux noise dephases the coupler".into(),
            },
        ],
        control_feedback: "Active reset conditioned on the readout of carrier 2".into(),
        operational_env: vec![
            EnvCondition {
                parameter: "temperature".into(),
                min: Some(q("5 mK")),
                max: Some(q("20 mK")),
                note: "Mixing-chamber plate of the dilution refrigerator".into(),
            },
            EnvCondition {
                parameter: "magnetic field".into(),
                min: Some(q("0 T")),
                max: Some(q("1 µT")),
                note: "Inside the mu-metal shield".into(),
            },
        ],
        non_operational_env: vec![HazardEnvironment {
            environment: "Ionising radiation".into(),
            mechanism: "Quasiparticle bursts after cosmic-ray impacts".into(),
            parameters: params(&[("event_rate", "0.1 Hz")]),
        }],
        hardware_requirements: strings(&["Dilution refrigerator", "Room-temperature control electronics"]),
    };

    let quantum_spec = QuantumSpec {
        system_architecture: SystemArchitecture {
            processes_algorithms: strings(&["Variational quantum eigensolver with a hardware-efficient ansatz", "Randomized benchmarking"]),
            circuit_design: AnnotatedText {
                text: "Linear chain of five transmons joined by tunable couplers".into(),
                doc_refs: strings(&["DOC-CIRCUIT"]),
            },
            physical_entanglement: "Nearest-neighbour entanglement through couplers; residual ZZ coupling is parasitic".into(),
        },
        hardware,
        interface: InterfaceSpec {
            data_type: "Pulse schedules in, bitstring histograms out".into(),
            data_handling: "OpenQASM 3 programs submitted over an authenticated HTTPS API".into(),
            potential_issues: strings(&["Readout back action on neighbouring qubits"]),
            assumptions: strings(&["Host software compiles to the native gate set"]),
            requirements: strings(&["Control rack supply ripple below 1 mV"]),
            software_requirements: strings(&["Acme SDK 3.x for calibration data analysis"]),
        },
        layer_model: Some(vec![
            Layer { layer_name: "Abstract".into(), description: "Variational circuits over the native gate set".into() },
            Layer { layer_name: "Physical".into(), description: "Transmons, couplers and readout resonators".into() },
            Layer { layer_name: "Control".into(), description: "Pulse sequencer and feedback FPGA".into() },
        ]),
    };

    let fmea_rows = vec![
        fmea_row("F1", FmeaLevel::Entity, 1, "TLS defect near qubit frequency", "T1 drop", (7, 5, 4), "Retune qubit frequency"),
        fmea_row("F2", FmeaLevel::System, 1, "TLS defect near qubit frequency", "VQE energy bias", (6, 5, 5), "Recalibrate before each job"),
        fmea_row("F3", FmeaLevel::Entity, 2, "Resonator frequency shift", "Readout errors", (5, 3, 3), "Periodic spectroscopy"),
        fmea_row("F4", FmeaLevel::System, 2, "Resonator frequency shift", "Corrupted histograms", (5, 3, 4), "Readout error mitigation"),
        fmea_row("F5", FmeaLevel::Entity, 3, "Flux trapping in coupler", "Offset drift", (7, 5, 4), "Magnetic shielding"),
        fmea_row("F6", FmeaLevel::System, 3, "Flux trapping in coupler", "Gate fidelity loss", (8, 3, 5), "Thermal cycle above Tc"),
    ];

    let metrics = vec![
        MetricReport {
            name: "T1".into(),
            purpose: "Energy relaxation time bounding usable circuit depth".into(),
            use_case_refs: vec![1, 2],
            definition: MetricDefinition {
                formula_text: "Exponential fit of excited-state population versus delay".into(),
                unit: UnitExpr::parse("µs").unwrap(),
                inputs: strings(&["excited-state population", "delay"]),
            },
            risk: Some(RiskScore::new(7, 5, 4).unwrap()),
            measurement: Measurement {
                method: "Inversion recovery on each qubit".into(),
                conditions: "Mixing chamber at 10 mK".into(),
            },
            statistics: Statistics {
                value: q("85 ± 3 µs"),
                uncertainty_kind: UncertaintyKind::StdDev,
                n_samples: Some(200),
                method: "Median over qubits of 200 repeated fits".into(),
            },
            benchmarks: strings(&["Median T1 of comparable five-qubit transmon devices"]),
            fundamental_limit: Some(QuantityOrText::classify("1 ms")),
            limitations_addressed: strings(&["UC1-L1"]),
        },
        MetricReport {
            name: "Two-qubit gate fidelity".into(),
            purpose: "Average fidelity of the native CZ gate".into(),
            use_case_refs: vec![1, 2],
            definition: MetricDefinition {
                formula_text: "1 - error per Clifford from interleaved randomized benchmarking".into(),
                unit: UnitExpr::dimensionless(),
                inputs: strings(&["sequence survival probabilities"]),
            },
            risk: Some(RiskScore::new(8, 3, 5).unwrap()),
            measurement: Measurement {
                method: "Interleaved randomized benchmarking".into(),
                conditions: "All spectator qubits idle".into(),
            },
            statistics: Statistics {
                value: q("0.991 ± 0.002"),
                uncertainty_kind: UncertaintyKind::ConfidenceInterval,
                n_samples: Some(50),
                method: "95% bootstrap interval over 50 random sequences".into(),
            },
            benchmarks: strings(&["Published CZ fidelities of comparable transmon devices"]),
            fundamental_limit: Some(QuantityOrText::classify("Coherence limit set by T1 and T2")),
            limitations_addressed: strings(&["UC2-L1"]),
        },
    ];

    let mut extensions = BTreeMap::new();
    extensions.insert("x-vendor".to_string(), serde_json::json!({"internal_id": "QPU-001", "tier": 2}));

    ModelCard {
        schema_version: SCHEMA_VERSION.into(),
        entity,
        intended_use: IntendedUse { use_cases },
        factors: Some(FactorsBlock {
            ml_components_present: true,
            factors: vec![Factor {
                name: "Pulse calibration surrogate".into(),
                description: "A neural-network surrogate proposes DRAG parameters during calibration".into(),
                relevant_metrics: strings(&["Two-qubit gate fidelity"]),
            }],
        }),
        quantum_spec,
        errors_section: ErrorsSection {
            error_sources: vec![ErrorSource {
                id: "ERR1".into(),
                source: "Two-level-system defects in the junction oxide".into(),
                classification: ErrorClass::Quantum,
                affected_phenomena: strings(&["energy relaxation", "entanglement fidelity"]),
                impact: Impact { text: "Sporadic reduction of T1".into(), estimate: Some(q("15 ± 5 µs")) },
                mitigation: strings(&["Tune qubit frequency away from defects"]),
                residual: "Occasional T1 dips between calibrations".into(),
            }],
            fmea_document_ref: Some("DOC-FMEA".into()),
            fmea_rows: Some(fmea_rows),
        },
        performance: PerformanceSection { metrics, unreported_metrics: strings(&["Quantum volume"]) },
        ethics: EthicsSection {
            impact_assessment: "User circuits and results are stored encrypted and deleted after 30 days".into(),
            mitigation_strategies: strings(&["Access control per project"]),
        },
        evaluation: EvaluationSection {
            model_validation: "Simulated VQE energies compared with exact diagonalisation".into(),
            hardware_verification: "Daily calibration suite against the specification sheet".into(),
            algorithmic_correctness: "Circuit equivalence checked by statevector simulation".into(),
            operational_stability: "T1 and fidelity tracked over 90 days".into(),
            reproducibility: "Calibration data and analysis notebooks published with DOC-PUB".into(),
        },
        assurability: AssurabilitySection {
            certifications: strings(&["ISO 9001 manufacturing"]),
            standards_compliance: "Control electronics comply with IEC 61010-1".into(),
            audit_reports: "Independent security audit 2024 found no critical issues".into(),
            evaluation_partners: strings(&["National Quantum Test Lab"]),
            physical_security: "Cryostat housed in an access-controlled laboratory".into(),
            cybersecurity: "API protected by mutual TLS".into(),
            fail_safe: "Automatic warm-up interlock on vacuum loss".into(),
            recovery_protocols: "Recalibration procedure after thermal cycling".into(),
            training_programs: "Two-day operator course".into(),
            support_resources: "Online documentation and a support desk".into(),
            assurance_case_ref: Some("DOC-AC".into()),
        },
        supplementary: SupplementarySection {
            references: strings(&["Koch et al., Charge-insensitive qubit design derived from the Cooper pair box (2007)"]),
            supporting_doc_refs: strings(&["DOC-PUB", "DOC-CIRCUIT", "DOC-FMEA", "DOC-AC"]),
        },
        extensions,
    }
}
