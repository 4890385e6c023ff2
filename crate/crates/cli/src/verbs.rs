use clap::ValueEnum;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum)]
pub enum Verb {
    Show,
    Dual,
    Ascent,
    Graph,
    Enumerate,
    VerifyCut,
    VerifyDiagram,
    Ideals,
    Isotonian,
    LetterplaceDual,
    NatDual,
    NatGap,
    NatStable,
    Export,
}

impl Verb {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

/// Library operations reached by each verb.
pub const VERB_TABLE: &[(Verb, &[&str])] = &[
    (Verb::Show, &["formats::parse_poset", "dlattice::enumerate_downsets", "Profunctor::profile", "Profunctor::coprofile"]),
    (Verb::Dual, &["Profunctor::dual", "SfIdeal::alexander_dual", "Cut::alexander_dual"]),
    (Verb::Ascent, &["Profunctor::ascent", "NatPro::ascent"]),
    (Verb::Graph, &["Profunctor::graph", "NatPro::graph"]),
    (Verb::Enumerate, &["profunctor::enumerate_profunctors", "cut_engine::materialize"]),
    (Verb::VerifyCut, &["cut_engine::verify_preserving_cut"]),
    (Verb::VerifyDiagram, &["cut_engine::verify_duality_diagram"]),
    (Verb::Ideals, &["ideals::lambda_gamma_ideals"]),
    (Verb::Isotonian, &["ideals::isotonian_ideal"]),
    (Verb::LetterplaceDual, &["ideals::verify_letterplace_duality"]),
    (Verb::NatDual, &["NatPro::dual"]),
    (Verb::NatGap, &["NatCut::gap_search", "NatCut::windowed_check", "natcut::clopen_check"]),
    (Verb::NatStable, &["NatCut::stable_pair"]),
    (Verb::Export, &["SfIdeal::export"]),
];

/// Every operation the command line exposes.
pub const OPERATIONS: &[&str] = &[
    "formats::parse_poset",
    "dlattice::enumerate_downsets",
    "Profunctor::profile",
    "Profunctor::coprofile",
    "Profunctor::dual",
    "SfIdeal::alexander_dual",
    "Cut::alexander_dual",
    "Profunctor::ascent",
    "NatPro::ascent",
    "Profunctor::graph",
    "NatPro::graph",
    "profunctor::enumerate_profunctors",
    "cut_engine::materialize",
    "cut_engine::verify_preserving_cut",
    "cut_engine::verify_duality_diagram",
    "ideals::lambda_gamma_ideals",
    "ideals::isotonian_ideal",
    "ideals::verify_letterplace_duality",
    "NatPro::dual",
    "NatCut::gap_search",
    "NatCut::windowed_check",
    "natcut::clopen_check",
    "NatCut::stable_pair",
    "SfIdeal::export",
];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_verb_has_one_row() {
        for v in Verb::value_variants() {
            assert_eq!(VERB_TABLE.iter().filter(|(w, _)| w == v).count(), 1, "{}", v.name());
        }
        assert_eq!(VERB_TABLE.len(), 14);
    }

    #[test]
    fn every_operation_has_one_verb() {
        for op in OPERATIONS {
            let owners: Vec<_> = VERB_TABLE.iter().filter(|(_, ops)| ops.contains(op)).map(|(v, _)| v.name()).collect();
            assert_eq!(owners.len(), 1, "{op} reached by {owners:?}");
        }
        let listed: usize = VERB_TABLE.iter().map(|(_, ops)| ops.len()).sum();
        assert_eq!(listed, OPERATIONS.len());
    }

    #[test]
    fn verb_names() {
        let names: Vec<String> = Verb::value_variants().iter().map(|v| v.name()).collect();
        assert!(names.contains(&"letterplace-dual".to_string()));
        assert!(names.contains(&"verify-cut".to_string()));
    }
}
