use std::collections::BTreeSet;

use super::ModelCard;
use crate::diagnostic::SourceLocation;

/// Something a card section can point at.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RefTarget {
    UseCase(u32),
    Limitation(String),
    Carrier(u32),
    Document(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    MetricUseCase,
    MetricLimitation,
    LocalCoherence,
    Control,
    Interconnect,
    Entanglement,
    FmeaRow,
    Document,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RefEdge {
    pub kind: EdgeKind,
    pub source: SourceLocation,
    pub target: RefTarget,
}

/// Directed references between card sections. Dangling edges are kept.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RefGraph {
    pub edges: Vec<RefEdge>,
    /// Targets the card declares (use cases, limitations, carriers, documents).
    pub declared: BTreeSet<RefTarget>,
}

impl RefGraph {
    pub fn is_empty(&self) -> bool {
        self.edges.is_empty() && self.declared.is_empty()
    }

    /// Declared and referenced targets, each once.
    pub fn nodes(&self) -> BTreeSet<&RefTarget> {
        self.declared.iter().chain(self.edges.iter().map(|e| &e.target)).collect()
    }

    pub fn dangling(&self) -> impl Iterator<Item = &RefEdge> {
        self.edges.iter().filter(|e| !self.declared.contains(&e.target))
    }

    pub fn edges_to(&self, target: &RefTarget) -> impl Iterator<Item = &RefEdge> + '_ {
        let target = target.clone();
        self.edges.iter().filter(move |e| e.target == target)
    }
}

pub fn collect_refs(card: &ModelCard) -> RefGraph {
    let mut g = RefGraph::default();
    let root = SourceLocation::root();
    let mut edge = |kind, source: SourceLocation, target| g.edges.push(RefEdge { kind, source, target });

    let hw_loc = root.key("quantum_spec").key("hardware");
    let hw = &card.quantum_spec.hardware;
    for (i, lc) in hw.local_coherence.iter().enumerate() {
        let loc = hw_loc.key("local_coherence").index(i).key("carrier_ref");
        edge(EdgeKind::LocalCoherence, loc, RefTarget::Carrier(lc.carrier_ref));
    }
    for (i, ent) in hw.nonlocal_coherence.iter().enumerate() {
        for (j, c) in ent.carrier_refs.iter().enumerate() {
            let loc = hw_loc.key("nonlocal_coherence").index(i).key("carrier_refs").index(j);
            edge(EdgeKind::Entanglement, loc, RefTarget::Carrier(*c));
        }
    }
    for (i, ic) in hw.interconnects.iter().enumerate() {
        for (j, c) in ic.endpoints.iter().enumerate() {
            let loc = hw_loc.key("interconnects").index(i).key("endpoints").index(j);
            edge(EdgeKind::Interconnect, loc, RefTarget::Carrier(*c));
        }
    }
    for (i, ctl) in hw.control.iter().enumerate() {
        let loc = hw_loc.key("control").index(i).key("carrier_ref");
        edge(EdgeKind::Control, loc, RefTarget::Carrier(ctl.carrier_ref));
    }

    let arch = &card.quantum_spec.system_architecture;
    for (i, d) in arch.circuit_design.doc_refs.iter().enumerate() {
        let loc = root.key("quantum_spec").key("system_architecture").key("circuit_design").key("doc_refs").index(i);
        edge(EdgeKind::Document, loc, RefTarget::Document(d.clone()));
    }

    let errors = &card.errors_section;
    if let Some(d) = &errors.fmea_document_ref {
        edge(EdgeKind::Document, root.key("errors").key("fmea_document_ref"), RefTarget::Document(d.clone()));
    }
    if let Some(rows) = &errors.fmea_rows {
        for (i, row) in rows.iter().enumerate() {
            let loc = root.key("errors").key("fmea_rows").index(i).key("component_ref");
            edge(EdgeKind::FmeaRow, loc, RefTarget::Carrier(row.component_ref));
        }
    }

    for (i, m) in card.performance.metrics.iter().enumerate() {
        let mloc = root.key("performance").key("metrics").index(i);
        for (j, uc) in m.use_case_refs.iter().enumerate() {
            edge(EdgeKind::MetricUseCase, mloc.key("use_case_refs").index(j), RefTarget::UseCase(*uc));
        }
        for (j, lim) in m.limitations_addressed.iter().enumerate() {
            let loc = mloc.key("limitations_addressed").index(j);
            edge(EdgeKind::MetricLimitation, loc, RefTarget::Limitation(lim.clone()));
        }
    }

    if let Some(d) = &card.assurability.assurance_case_ref {
        edge(EdgeKind::Document, root.key("assurability").key("assurance_case_ref"), RefTarget::Document(d.clone()));
    }
    for (i, d) in card.supplementary.supporting_doc_refs.iter().enumerate() {
        let loc = root.key("supplementary").key("supporting_doc_refs").index(i);
        edge(EdgeKind::Document, loc, RefTarget::Document(d.clone()));
    }

    for uc in &card.intended_use.use_cases {
        g.declared.insert(RefTarget::UseCase(uc.id));
        for lim in &uc.limitations {
            g.declared.insert(RefTarget::Limitation(lim.id.clone()));
        }
    }
    for c in &hw.carriers {
        g.declared.insert(RefTarget::Carrier(c.id));
    }
    for d in &card.entity.supporting_documents {
        g.declared.insert(RefTarget::Document(d.id.clone()));
    }
    g
}
