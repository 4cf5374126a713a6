use std::fs;
use std::path::{Path, PathBuf};

use occ2vec::onet::{
    catalog_to_bytes, parse_onet_tables, read_catalog, write_catalog, Category, DescriptorKind, REQUIRED_FILES,
};
use occ2vec::Error;

fn fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/onet_mini")
}

#[test]
fn mini_release_counts() {
    let (catalog, report) = parse_onet_tables(fixture_dir()).unwrap();
    assert_eq!(catalog.occupations().len(), 18);
    assert_eq!(report.occupations, 18);
    assert_eq!(report.dropped_occupations, vec!["55-1011.00".to_string()]);
    assert_eq!(report.tasks, 54);
    assert_eq!(report.attributes, 36);
    assert_eq!(report.unrated_tasks, 1);
    assert_eq!(report.descriptors_per_category[&Category::Description], 18);
    assert!(catalog.occupation_index("55-1011.00").is_none());
    // An element defined in the content model but never rated is not a descriptor.
    assert!(catalog.find_descriptor(DescriptorKind::Attribute, "1.A.3.a.1").is_none());
}

#[test]
fn every_bundle_is_a_weighted_average() {
    let (catalog, _) = parse_onet_tables(fixture_dir()).unwrap();
    let mut bundles = 0;
    for (occ, category, items) in catalog.bundles() {
        let total: f64 = items.iter().map(|w| w.weight).sum();
        assert!((total - 1.0).abs() < 1e-9, "{occ} {category}: {total}");
        assert!(items.iter().all(|w| w.weight >= 0.0));
        assert!(items.iter().all(|w| catalog.descriptor(w.descriptor).category == category));
        bundles += 1;
    }
    assert!(bundles >= 18 * 10);
    for i in 0..catalog.occupations().len() {
        assert_eq!(catalog.categories_of(i).len(), 10);
    }
}

#[test]
fn reparsing_gives_identical_bytes() {
    let (a, _) = parse_onet_tables(fixture_dir()).unwrap();
    let (b, _) = parse_onet_tables(fixture_dir()).unwrap();
    let bytes = catalog_to_bytes(&a);
    assert_eq!(bytes, catalog_to_bytes(&b));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("catalog.bin");
    write_catalog(&a, &path).unwrap();
    let back = read_catalog(&path).unwrap();
    assert_eq!(back, a);
    assert_eq!(fs::read(&path).unwrap(), bytes);
}

fn copy_fixture() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for name in REQUIRED_FILES {
        fs::copy(fixture_dir().join(name), dir.path().join(name)).unwrap();
    }
    dir
}

#[test]
fn missing_scales_reference_is_named() {
    let dir = copy_fixture();
    fs::remove_file(dir.path().join("Scales Reference.txt")).unwrap();
    let err = parse_onet_tables(dir.path()).unwrap_err();
    assert!(matches!(&err, Error::MissingFile(p) if p.ends_with("Scales Reference.txt")), "{err}");
    assert!(err.to_string().contains("Scales Reference.txt"));
}

#[test]
fn malformed_row_reports_file_and_line() {
    let dir = copy_fixture();
    let path = dir.path().join("Skills.txt");
    let mut text = fs::read_to_string(&path).unwrap();
    text.push_str("11-1011.00\t2.A.1.a\tReading Comprehension\tIM\tn/a\tlots\tN\n");
    fs::write(&path, &text).unwrap();
    let err = parse_onet_tables(dir.path()).unwrap_err().to_string();
    let line = text.lines().count();
    assert!(err.contains("Skills.txt") && err.contains(&format!(":{line}:")), "{err}");
}

const ATTR_HEADER: &str = "O*NET-SOC Code\tElement ID\tElement Name\tScale ID\tCategory\tData Value\tRecommend Suppress\n";

/// Two occupations, two abilities, one task each; every other table is
/// header-only.
fn write_two_occupation_release(dir: &Path) {
    let files: [(&str, String); 13] = [
        (
            "Occupation Data.txt",
            "O*NET-SOC Code\tTitle\tDescription\n\
             11-1011.00\tChief Executives\tPlan and direct the organization.\n\
             43-3031.00\tBookkeeping Clerks\tKeep financial records.\n"
                .into(),
        ),
        (
            "Scales Reference.txt",
            "Scale ID\tScale Name\tMinimum\tMaximum\nIM\tImportance\t1\t5\nLV\tLevel\t0\t7\n\
             RT\tRelevance of Task\t0\t100\nFT\tFrequency of Task\t1\t7\n"
                .into(),
        ),
        (
            "Content Model Reference.txt",
            "Element ID\tElement Name\tDescription\n\
             1.A.1.a.1\tOral Comprehension\tListen to and understand spoken information.\n\
             1.A.1.b.5\tDeductive Reasoning\tApply general rules to specific problems.\n"
                .into(),
        ),
        (
            "Task Statements.txt",
            "O*NET-SOC Code\tTask ID\tTask\tTask Type\tIncumbents Responding\tDate\tDomain Source\n\
             11-1011.00\t1\tSet strategy.\tCore\t10\t07/2014\tIncumbent\n\
             43-3031.00\t2\tPost ledger entries.\tCore\t10\t07/2014\tIncumbent\n"
                .into(),
        ),
        (
            "Task Ratings.txt",
            "O*NET-SOC Code\tTask ID\tScale ID\tCategory\tData Value\tN\tDate\n\
             11-1011.00\t1\tIM\tn/a\t4.0\t10\t07/2014\n\
             11-1011.00\t1\tRT\tn/a\t90\t10\t07/2014\n\
             43-3031.00\t2\tIM\tn/a\t3.0\t10\t07/2014\n"
                .into(),
        ),
        (
            "Abilities.txt",
            format!(
                "{ATTR_HEADER}\
                 11-1011.00\t1.A.1.a.1\tOral Comprehension\tIM\tn/a\t4.5\tN\n\
                 11-1011.00\t1.A.1.a.1\tOral Comprehension\tLV\tn/a\t6.0\tN\n\
                 11-1011.00\t1.A.1.b.5\tDeductive Reasoning\tIM\tn/a\t2.0\tN\n\
                 11-1011.00\t1.A.1.b.5\tDeductive Reasoning\tLV\tn/a\t1.0\tN\n\
                 43-3031.00\t1.A.1.a.1\tOral Comprehension\tIM\tn/a\t3.0\tN\n\
                 43-3031.00\t1.A.1.a.1\tOral Comprehension\tLV\tn/a\t3.5\tN\n"
            ),
        ),
        ("Skills.txt", ATTR_HEADER.into()),
        ("Knowledge.txt", ATTR_HEADER.into()),
        ("Work Activities.txt", ATTR_HEADER.into()),
        ("Work Styles.txt", ATTR_HEADER.into()),
        ("Work Values.txt", ATTR_HEADER.into()),
        ("Interests.txt", ATTR_HEADER.into()),
        ("Work Context.txt", ATTR_HEADER.into()),
    ];
    for (name, body) in files {
        fs::write(dir.join(name), body).unwrap();
    }
}

#[test]
fn two_occupation_weights_match_hand_computation() {
    let dir = tempfile::tempdir().unwrap();
    write_two_occupation_release(dir.path());
    let (catalog, report) = parse_onet_tables(dir.path()).unwrap();
    assert_eq!(report.occupations, 2);

    let ceo = catalog.occupation_index("11-1011.00").unwrap();
    let oral = catalog.find_descriptor(DescriptorKind::Attribute, "1.A.1.a.1").unwrap();
    let deduct = catalog.find_descriptor(DescriptorKind::Attribute, "1.A.1.b.5").unwrap();
    // Unit scores: mean of (IM − 1)/4 and LV/7.
    let u_oral = ((4.5 - 1.0) / 4.0 + 6.0 / 7.0) / 2.0;
    let u_deduct = ((2.0 - 1.0) / 4.0 + 1.0 / 7.0) / 2.0;
    assert!((catalog.attribute_score(ceo, oral).unwrap() - u_oral).abs() < 1e-12);
    let bundle = catalog.bundle(ceo, Category::Abilities).unwrap();
    for w in bundle {
        let expected = if w.descriptor == oral { u_oral } else { u_deduct } / (u_oral + u_deduct);
        assert!((w.weight - expected).abs() < 1e-12, "{} vs {expected}", w.weight);
    }
    assert_eq!(catalog.bundle(ceo, Category::Tasks).unwrap()[0].weight, 1.0);

    let clerk = catalog.occupation_index("43-3031.00").unwrap();
    assert_eq!(catalog.bundle(clerk, Category::Abilities).unwrap().len(), 1);
    assert!(catalog.attribute_score(clerk, deduct).is_none());
    // Categories without data are recorded, not invented.
    assert!(catalog.bundle(clerk, Category::Skills).is_none());
    assert!(report.dropped_categories.contains(&("43-3031.00".to_string(), Category::Skills)));
}
