//! Published per-paradigm accuracies, used to flag where a run departs from
//! the reference numbers.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceRow {
    pub phenomenon: &'static str,
    pub paradigm: &'static str,
    /// BabyBERTa trained on AO-CHILDES.
    pub babyberta: f64,
    pub word: f64,
    pub tag: f64,
    pub oracle: f64,
    pub rule: f64,
}

const fn row(phenomenon: &'static str, paradigm: &'static str, v: [f64; 5]) -> ReferenceRow {
    ReferenceRow {
        phenomenon,
        paradigm,
        babyberta: v[0],
        word: v[1],
        tag: v[2],
        oracle: v[3],
        rule: v[4],
    }
}

/// Headline numbers printed for a benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub paradigms: usize,
    pub babyberta_avg: f64,
    pub word_avg: f64,
    pub tag_avg: f64,
    pub oracle_avg: f64,
    pub rule_avg: f64,
    /// Paradigms where each column is at least BabyBERTa.
    pub word_best: usize,
    pub tag_best: usize,
    pub either_best: usize,
    pub oracle_best: usize,
    pub rule_best: usize,
    pub rule_perfect: usize,
}

pub const ZORRO_SUMMARY: Summary = Summary {
    paradigms: 23,
    babyberta_avg: 78.91,
    word_avg: 63.44,
    tag_avg: 57.59,
    oracle_avg: 83.43,
    rule_avg: 93.97,
    word_best: 8,
    tag_best: 8,
    either_best: 11,
    oracle_best: 14,
    rule_best: 22,
    rule_perfect: 14,
};

pub const BLIMP_SUMMARY: Summary = Summary {
    paradigms: 67,
    babyberta_avg: 60.72,
    word_avg: 50.72,
    tag_avg: 37.93,
    oracle_avg: 68.32,
    rule_avg: 84.35,
    word_best: 18,
    tag_best: 10,
    either_best: 23,
    oracle_best: 48,
    rule_best: 62,
    rule_perfect: 14,
};

/// Published within-type variability of the human judgments.
pub const HUMAN_VARIABILITY: f64 = 0.288;
/// Trigram log-likelihood and SLOR variabilities.
pub const TRIGRAM_LL_VARIABILITY: f64 = 0.331;
pub const TRIGRAM_SLOR_VARIABILITY: f64 = 0.599;

pub const LI_ADGER_TYPES: usize = 519;
pub const LI_ADGER_PAIRS: usize = 2391;

pub const ZORRO: &[ReferenceRow] = &[
    row("agreement_subject_verb", "agreement_subject_verb-across_relative_clause", [64.85, 50.95, 46.35, 68.95, 96.2]),
    row("agreement_subject_verb", "agreement_subject_verb-in_simple_question", [92.35, 61.15, 90.9, 93.9, 98.3]),
    row("agreement_subject_verb", "agreement_subject_verb-in_question_with_aux", [90.85, 59.0, 80.15, 90.9, 98.05]),
    row("agreement_subject_verb", "agreement_subject_verb-across_prepositional_phrase", [72.85, 50.0, 50.0, 62.6, 98.4]),
    row("agreement_determiner_noun", "agreement_determiner_noun-between_neighbors", [91.3, 83.05, 49.85, 88.6, 98.6]),
    row("agreement_determiner_noun", "agreement_determiner_noun-across_1_adjective", [89.85, 50.45, 50.05, 75.05, 97.2]),
    row("filler-gap", "filler-gap-wh_question_object", [98.75, 42.8, 100.0, 100.0, 100.0]),
    row("filler-gap", "filler-gap-wh_question_subject", [75.7, 88.3, 76.55, 97.1, 100.0]),
    row("island-effects", "island-effects-coordinate_structure_constraint", [97.05, 43.35, 55.6, 83.85, 100.0]),
    row("island-effects", "island-effects-adjunct_island", [56.15, 66.1, 58.8, 83.85, 100.0]),
    row("quantifiers", "quantifiers-existential_there", [92.9, 80.25, 38.4, 89.55, 100.0]),
    row("quantifiers", "quantifiers-superlative", [64.55, 45.1, 82.0, 96.05, 100.0]),
    row("npi_licensing", "npi_licensing-only_npi_licensor", [74.1, 79.4, 3.7, 79.4, 100.0]),
    row("npi_licensing", "npi_licensing-matrix_question", [65.25, 47.5, 28.65, 58.0, 100.0]),
    row("argument_structure", "argument_structure-swapped_arguments", [91.0, 92.15, 81.7, 98.85, 100.0]),
    row("argument_structure", "argument_structure-transitive", [60.05, 64.15, 32.65, 78.6, 58.05]),
    row("argument_structure", "argument_structure-dropped_argument", [79.9, 85.05, 83.6, 95.75, 100.0]),
    row("irregular", "irregular-verb", [69.65, 62.9, 93.6, 96.35, 88.4]),
    row("anaphor_agreement", "anaphor_agreement-pronoun_gender", [51.75, 49.15, 1.95, 50.95, 52.75]),
    row("ellipsis", "ellipsis-n_bar", [55.3, 66.6, 63.6, 89.9, 100.0]),
    row("binding", "binding-principle_a", [89.4, 45.9, 3.6, 47.75, 100.0]),
    row("case", "case-subjective_pronoun", [94.7, 99.55, 97.95, 100.0, 100.0]),
    row("local_attractor", "local_attractor-in_question_with_aux", [96.65, 55.65, 95.0, 99.05, 100.0]),
];

pub const BLIMP: &[ReferenceRow] = &[
    row("anaphor_agreement", "anaphor_gender_agreement", [65.6, 26.3, 8.0, 33.9, 73.9]),
    row("anaphor_agreement", "anaphor_number_agreement", [73.7, 52.9, 5.7, 55.5, 80.1]),
    row("argument_structure", "causative", [58.5, 55.2, 30.7, 68.8, 85.6]),
    row("argument_structure", "drop_argument", [63.2, 50.9, 52.9, 80.8, 77.1]),
    row("argument_structure", "inchoative", [50.7, 56.0, 37.1, 73.8, 57.1]),
    row("argument_structure", "intransitive", [52.1, 48.2, 49.6, 76.3, 73.55]),
    row("argument_structure", "passive_1", [50.2, 52.1, 12.9, 56.4, 59.5]),
    row("argument_structure", "passive_2", [54.0, 48.4, 18.1, 56.8, 59.6]),
    row("argument_structure", "transitive", [55.3, 51.6, 36.1, 67.6, 57.85]),
    row("binding", "principle_A_case_1", [43.6, 100.0, 7.1, 100.0, 100.0]),
    row("binding", "principle_A_case_2", [99.9, 41.5, 13.0, 48.3, 99.2]),
    row("binding", "principle_A_c_command", [58.7, 35.7, 4.2, 38.1, 71.35]),
    row("binding", "principle_A_domain_1", [96.5, 38.4, 3.1, 40.7, 100.0]),
    row("binding", "principle_A_domain_2", [51.4, 61.7, 2.7, 62.8, 58.3]),
    row("binding", "principle_A_domain_3", [46.8, 44.5, 29.7, 61.1, 50.4]),
    row("binding", "principle_A_reconstruction", [40.9, 32.1, 53.9, 68.0, 74.1]),
    row("control_raising", "existential_there_object_raising", [59.1, 30.5, 23.4, 46.5, 67.95]),
    row("control_raising", "existential_there_subject_raising", [51.0, 43.4, 17.0, 53.6, 77.0]),
    row("control_raising", "expletive_it_object_raising", [63.3, 61.2, 48.3, 79.6, 69.5]),
    row("control_raising", "tough_vs_raising_1", [72.2, 59.1, 49.6, 83.2, 87.1]),
    row("control_raising", "tough_vs_raising_2", [34.4, 41.3, 18.4, 54.1, 92.5]),
    row("determiner_noun_agreement", "determiner_noun_agreement_irregular_1", [66.6, 48.8, 37.4, 61.3, 68.45]),
    row("determiner_noun_agreement", "determiner_noun_agreement_irregular_2", [87.4, 74.3, 12.3, 77.1, 73.7]),
    row("determiner_noun_agreement", "determiner_noun_agreement_with_adjective_1", [76.3, 48.2, 49.7, 63.8, 95.95]),
    row("determiner_noun_agreement", "determiner_noun_agreement_with_adj_irregular_1", [82.9, 49.0, 49.7, 56.3, 74.45]),
    row("determiner_noun_agreement", "determiner_noun_agreement_with_adj_irregular_2", [67.0, 49.5, 18.3, 58.2, 71.8]),
    row("determiner_noun_agreement", "determiner_noun_agreement_with_adj_2", [80.4, 49.8, 19.9, 59.7, 95.6]),
    row("determiner_noun_agreement", "determiner_noun_agreement_1", [72.2, 64.1, 48.1, 74.5, 95.55]),
    row("determiner_noun_agreement", "determiner_noun_agreement_2", [87.4, 65.2, 11.0, 68.1, 96.75]),
    row("ellipsis", "ellipsis_n_bar_1", [58.7, 64.1, 63.5, 86.4, 85.65]),
    row("ellipsis", "ellipsis_n_bar_2", [42.8, 39.9, 70.5, 80.9, 99.95]),
    row("filler_gap_dependency", "wh_questions_object_gap", [73.0, 37.0, 82.4, 89.2, 99.95]),
    row("filler_gap_dependency", "wh_questions_subject_gap", [79.9, 49.0, 81.4, 89.4, 99.9]),
    row("filler_gap_dependency", "wh_vs_that_no_gap", [90.9, 77.2, 83.8, 94.9, 99.95]),
    row("filler_gap_dependency", "wh_vs_that_no_gap_long_distance", [92.1, 74.9, 87.0, 95.8, 99.7]),
    row("filler_gap_dependency", "wh_vs_that_with_gap", [29.1, 22.7, 15.0, 33.0, 100.0]),
    row("filler_gap_dependency", "wh_vs_that_with_gap_long_distance", [14.9, 25.8, 12.8, 32.8, 99.9]),
    row("irregular_forms", "irregular_past_participle_adjectives", [59.8, 99.4, 12.2, 99.4, 100.0]),
    row("irregular_forms", "irregular_past_participle_verbs", [59.8, 99.4, 12.2, 99.4, 100.0]),
    row("island_effects", "adjunct_island", [63.8, 58.4, 55.5, 82.5, 94.5]),
    row("island_effects", "coordinate_structure_constraint_complex_left_branch", [36.2, 11.8, 19.6, 26.9, 97.05]),
    row("island_effects", "coordinate_structure_constraint_object_extraction", [56.5, 41.9, 37.1, 63.7, 86.35]),
    row("island_effects", "left_branch_island_echo_question", [52.4, 16.3, 30.1, 38.7, 100.0]),
    row("island_effects", "left_branch_island_simple_question", [66.6, 24.5, 30.3, 43.8, 97.9]),
    row("island_effects", "sentential_subject_island", [46.1, 37.3, 42.8, 62.9, 82.65]),
    row("island_effects", "wh_island", [47.1, 69.0, 93.4, 97.3, 100.0]),
    row("npi_licensing", "matrix_question_npi_licensor_present", [56.4, 41.1, 39.5, 65.7, 97.4]),
    row("npi_licensing", "npi_present_1", [27.0, 56.0, 26.7, 69.6, 100.0]),
    row("npi_licensing", "npi_present_2", [20.3, 56.4, 25.8, 70.5, 100.0]),
    row("npi_licensing", "only_npi_licensor_present", [71.6, 98.4, 2.4, 98.5, 100.0]),
    row("npi_licensing", "only_npi_scope", [72.1, 80.4, 79.4, 97.2, 100.0]),
    row("npi_licensing", "sentential_negation_npi_licensor_present", [73.8, 100.0, 0.0, 100.0, 100.0]),
    row("npi_licensing", "sentential_negation_npi_scope", [81.9, 40.0, 65.3, 79.6, 100.0]),
    row("quantifiers", "existential_there_quantifiers_1", [93.7, 79.1, 26.4, 87.4, 97.3]),
    row("quantifiers", "existential_there_quantifiers_2", [35.7, 19.6, 36.0, 50.6, 96.85]),
    row("quantifiers", "superlative_quantifiers_1", [49.5, 73.0, 89.8, 96.4, 100.0]),
    row("quantifiers", "superlative_quantifiers_2", [61.2, 51.9, 0.1, 52.0, 100.0]),
    row("s-selection", "animate_subject_passive", [45.5, 48.4, 24.0, 58.4, 65.25]),
    row("s-selection", "animate_subject_trans", [59.7, 50.0, 57.1, 78.2, 84.65]),
    row("subject_verb_agreement", "distractor_agreement_relational_noun", [29.0, 26.2, 21.4, 42.1, 50.25]),
    row("subject_verb_agreement", "distractor_agreement_relative_clause", [35.6, 28.3, 30.4, 49.8, 55.85]),
    row("subject_verb_agreement", "irregular_plural_subject_verb_agreement_1", [67.9, 33.4, 51.7, 62.5, 53.2]),
    row("subject_verb_agreement", "irregular_plural_subject_verb_agreement_2", [66.2, 51.0, 51.9, 70.7, 59.3]),
    row("subject_verb_agreement", "regular_plural_subject_verb_agreement_1", [68.8, 39.9, 51.1, 72.0, 64.35]),
    row("subject_verb_agreement", "regular_plural_subject_verb_agreement_2", [60.1, 51.0, 55.6, 76.9, 73.15]),
];

/// The reference table for a benchmark name (`zorro` or `blimp`).
pub fn table(benchmark: &str) -> Option<&'static [ReferenceRow]> {
    match benchmark {
        "zorro" => Some(ZORRO),
        "blimp" => Some(BLIMP),
        _ => None,
    }
}

pub fn lookup(table: &'static [ReferenceRow], paradigm: &str) -> Option<&'static ReferenceRow> {
    table.iter().find(|r| r.paradigm == paradigm)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Deviation {
    pub paradigm: String,
    pub observed: f64,
    pub reference: f64,
    pub delta: f64,
}

/// Paradigms whose observed value differs from `column` of the reference
/// row by more than `tolerance` points. Paradigms missing from the table
/// are skipped.
pub fn deviations<'a>(
    table: &'static [ReferenceRow],
    observed: impl IntoIterator<Item = (&'a str, f64)>,
    column: fn(&ReferenceRow) -> f64,
    tolerance: f64,
) -> Vec<Deviation> {
    observed
        .into_iter()
        .filter_map(|(paradigm, value)| {
            let reference = column(lookup(table, paradigm)?);
            let delta = value - reference;
            (delta.abs() > tolerance).then(|| Deviation {
                paradigm: paradigm.to_string(),
                observed: value,
                reference,
                delta,
            })
        })
        .collect()
}
