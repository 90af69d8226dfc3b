//! Loader/writer behaviour: CSV round-trips, the UCI sequence format,
//! sidecar domain overrides, and the specific failure modes each promises.

use std::io::Cursor;

use proptest::prelude::*;

use rascal::io::{load_csv, load_uci_molbio, parse_sidecar, save_csv, DataError};
use rascal_core::data::{Dataset, Instance, Provenance};
use rascal_core::schema::{Feature, Schema};

fn no_overrides() -> Vec<(String, Vec<String>)> {
    Vec::new()
}

fn load(text: &str, class: &str) -> Result<Dataset, DataError> {
    load_csv(Cursor::new(text.to_string()), class, &no_overrides())
}

#[test]
fn reads_a_small_binary_table() {
    let dataset = load("a,b,class\nT,F,T\nF,F,F\nT,T,T\n", "class").unwrap();
    assert_eq!(dataset.len(), 3);
    assert_eq!(dataset.schema().feature_count(), 2);
    assert_eq!(dataset.schema().feature(0).domain(), ["F", "T"]);
    assert!(dataset.instances().iter().all(|i| !i.is_virtual()));
    // Values map to sorted-domain indices.
    assert_eq!(dataset.instances()[0].values, vec![1, 0]);
    assert_eq!(dataset.instances()[0].class_value, 1);
}

#[test]
fn class_column_may_sit_anywhere() {
    let dataset = load("class,a,b\nyes,x,p\nno,y,q\n", "class").unwrap();
    assert_eq!(dataset.schema().class().domain(), ["no", "yes"]);
    assert_eq!(dataset.schema().feature(0).name(), "a");
    assert_eq!(dataset.instances()[0].class_value, 1);
}

#[test]
fn reports_the_promised_failure_modes() {
    assert!(matches!(load("", "class"), Err(DataError::Empty)));
    assert!(matches!(
        load("a,class\nT,T\n", "label"),
        Err(DataError::ClassColumnMissing(name)) if name == "label"
    ));
    assert!(matches!(
        load("a,class\nT\nF,F\n", "class"),
        Err(DataError::RaggedRow { line: 2, expected: 2, found: 1 })
    ));
    assert!(matches!(
        load("a,class\nT,T\nF,T\n", "class"),
        Err(DataError::TooFewClassLabels)
    ));
}

proptest! {
    /// save → load reproduces the dataset exactly, including provenance,
    /// as long as every domain value is actually observed (padding rows
    /// guarantee that here).
    #[test]
    fn csv_round_trip_is_exact(
        arities in prop::collection::vec(2..5usize, 1..5),
        extra_rows in prop::collection::vec((any::<u64>(), 0..2usize, any::<bool>()), 0..25),
    ) {
        let features: Vec<Feature> = arities
            .iter()
            .enumerate()
            .map(|(i, &arity)| {
                Feature::new(format!("f{i}"), (0..arity).map(|v| format!("v{v}")))
            })
            .collect();
        let schema = Schema::new(features, Feature::new("class", ["n", "y"])).unwrap();

        // Coverage rows: every feature value and both labels appear.
        let max_arity = *arities.iter().max().unwrap();
        let mut instances: Vec<Instance> = (0..max_arity.max(2))
            .map(|row| {
                let values = arities.iter().map(|&a| row % a).collect();
                Instance::original(values, row % 2)
            })
            .collect();
        for (bits, label, is_virtual) in &extra_rows {
            let values: Vec<usize> = arities
                .iter()
                .enumerate()
                .map(|(i, &a)| (bits >> (8 * i)) as usize % a)
                .collect();
            instances.push(if *is_virtual {
                Instance::generated(values, *label, 3)
            } else {
                Instance::original(values, *label)
            });
        }
        let dataset = Dataset::new(schema, instances).unwrap();

        let mut bytes = Vec::new();
        save_csv(&dataset, &mut bytes, true).unwrap();
        let loaded = load_csv(Cursor::new(bytes), "class", &no_overrides()).unwrap();
        prop_assert_eq!(&loaded, &dataset);

        // Without the provenance column everything degrades to original.
        let mut plain = Vec::new();
        save_csv(&dataset, &mut plain, false).unwrap();
        let reloaded = load_csv(Cursor::new(plain), "class", &no_overrides()).unwrap();
        prop_assert_eq!(reloaded.schema(), dataset.schema());
        for (a, b) in reloaded.instances().iter().zip(dataset.instances()) {
            prop_assert_eq!(&a.values, &b.values);
            prop_assert_eq!(a.class_value, b.class_value);
            prop_assert_eq!(a.provenance, Provenance::Original);
        }
    }
}

#[test]
fn empty_dataset_saves_as_a_header_only_file() {
    let schema = Schema::new(vec![Feature::binary("a")], Feature::binary("class")).unwrap();
    let dataset = Dataset::new(schema, vec![]).unwrap();
    let mut bytes = Vec::new();
    save_csv(&dataset, &mut bytes, false).unwrap();
    assert_eq!(String::from_utf8(bytes).unwrap(), "a,class\n");
}

#[test]
fn quoted_fields_survive_the_round_trip() {
    // Domain listed in sorted order so inference on reload agrees.
    let schema = Schema::new(
        vec![Feature::new("note", ["has\"quote", "has,comma", "plain"])],
        Feature::binary("class"),
    )
    .unwrap();
    let instances = vec![
        Instance::original(vec![0], 0),
        Instance::original(vec![1], 1),
        Instance::original(vec![2], 0),
    ];
    let dataset = Dataset::new(schema, instances).unwrap();
    let mut bytes = Vec::new();
    save_csv(&dataset, &mut bytes, false).unwrap();
    let loaded = load_csv(Cursor::new(bytes), "class", &no_overrides()).unwrap();
    assert_eq!(loaded, dataset);
}

#[test]
fn sequence_lines_become_positional_features() {
    let text = "+,S1, at cg\tga\n-,S2, ggccaa\n";
    let dataset = load_uci_molbio(Cursor::new(text.to_string()), &no_overrides()).unwrap();
    assert_eq!(dataset.schema().feature_count(), 6);
    assert_eq!(dataset.schema().feature(0).name(), "p1");
    assert_eq!(dataset.schema().feature(5).name(), "p6");
    assert_eq!(dataset.schema().class().domain(), ["+", "-"]);
    assert_eq!(dataset.len(), 2);
    // p1 saw {a, g}; indices follow the sorted domain.
    assert_eq!(dataset.schema().feature(0).domain(), ["a", "g"]);
    assert_eq!(dataset.instances()[0].values[0], 0);
    assert_eq!(dataset.instances()[1].values[0], 1);
}

#[test]
fn sequence_ambiguity_codes_are_ordinary_values() {
    let text = "EI,a,acgt\nIE,b,acgn\nN,c,acgd\n";
    let dataset = load_uci_molbio(Cursor::new(text.to_string()), &no_overrides()).unwrap();
    assert_eq!(dataset.schema().class().domain(), ["EI", "IE", "N"]);
    assert_eq!(dataset.schema().feature(3).domain(), ["d", "n", "t"]);
}

#[test]
fn sequence_failure_modes_name_their_line() {
    let bad_length = load_uci_molbio(
        Cursor::new("+,a,acgt\n-,b,acg\n".to_string()),
        &no_overrides(),
    )
    .unwrap_err();
    assert!(matches!(
        bad_length,
        DataError::InconsistentSequenceLength { line: 2, expected: 4, found: 3 }
    ));

    let missing = load_uci_molbio(
        Cursor::new("+,a,ac?t\n".to_string()),
        &no_overrides(),
    )
    .unwrap_err();
    assert!(matches!(missing, DataError::MissingValue { line: 1 }));

    let garbage = load_uci_molbio(
        Cursor::new("+,a,acgt\n-,b,ac9t\n".to_string()),
        &no_overrides(),
    )
    .unwrap_err();
    assert!(matches!(garbage, DataError::BadSequenceChar { line: 2, ch: '9' }));

    let truncated = load_uci_molbio(Cursor::new("justalabel\n".to_string()), &no_overrides())
        .unwrap_err();
    assert!(matches!(truncated, DataError::MalformedLine { line: 1, .. }));

    let empty = load_uci_molbio(Cursor::new("\n  \n".to_string()), &no_overrides()).unwrap_err();
    assert!(matches!(empty, DataError::Empty));
}

#[test]
fn sidecar_overrides_widen_domains_in_declared_order() {
    let overrides = parse_sidecar(
        "# wind levels\nwind = calm, weak, strong\nclass = no, yes\n",
    )
    .unwrap();
    let dataset = load_csv(
        Cursor::new("wind,class\nweak,yes\nstrong,no\n".to_string()),
        "class",
        &overrides,
    )
    .unwrap();
    // Declared order wins over lexicographic inference, and `calm` exists
    // even though no row exhibits it.
    assert_eq!(dataset.schema().feature(0).domain(), ["calm", "weak", "strong"]);
    assert_eq!(dataset.instances()[0].values, vec![1]);
}

#[test]
fn sidecar_mistakes_are_rejected() {
    assert!(matches!(
        parse_sidecar("wind weak, strong\n"),
        Err(DataError::BadSidecarLine { line: 1 })
    ));
    assert!(matches!(
        parse_sidecar("wind = weak\nwind = strong\n"),
        Err(DataError::BadSidecarLine { line: 2 })
    ));

    let unknown = parse_sidecar("breeze = weak, strong\n").unwrap();
    assert!(matches!(
        load_csv(Cursor::new("wind,class\nweak,y\nweak,n\n".to_string()), "class", &unknown),
        Err(DataError::UnknownSidecarAttribute(name)) if name == "breeze"
    ));

    let narrow = parse_sidecar("wind = weak\n").unwrap();
    assert!(matches!(
        load_csv(Cursor::new("wind,class\nweak,y\nstrong,n\n".to_string()), "class", &narrow),
        Err(DataError::DomainOmitsValue { name, value }) if name == "wind" && value == "strong"
    ));
}
