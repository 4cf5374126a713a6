use std::path::Path;

use occ2vec::embedding::{hash_embed, EmbedderConfig, EmbeddingCache};
use occ2vec::occupation::{characteristic_embedding, embed_catalog, embed_occupations};
use occ2vec::onet::{
    load_characteristic, parse_onet_tables, CatalogBuilder, Category, CharacteristicDefinition, DescriptorKind,
    Occupation,
};
use occ2vec::scoring::{score_all, top_bottom, ScoreTable, SCORE_CSV_HEADER};
use occ2vec::stats::{mean, sample_sd};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fixtures() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures"))
}

const WORDS: &[&str] = &[
    "inspect", "repair", "engines", "teach", "students", "lessons", "prepare", "meals", "kitchen", "audit",
    "ledgers", "accounts", "drive", "trucks", "freight", "paint", "murals", "canvas", "treat", "patients",
    "clinic", "survey", "land", "maps", "negotiate", "contracts", "clients", "weld", "steel", "beams",
];

/// Ten occupations with random task wording; one of them reuses the
/// characteristic's words in its tasks.
fn planted_catalog(seed: u64, planted: usize, target: &[&str]) -> occ2vec::onet::DescriptorCatalog {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = CatalogBuilder::new();
    for i in 0..10 {
        let soc = format!("11-{:04}.00", 1000 + i);
        b.add_occupation(Occupation::new(&soc, &format!("Occupation {i}")).unwrap()).unwrap();
        for t in 0..3 {
            let text: Vec<&str> = if i == planted {
                target.to_vec()
            } else {
                (0..6).map(|_| *WORDS.choose(&mut rng).unwrap()).collect()
            };
            let d = b
                .add_descriptor(DescriptorKind::Task, Category::Tasks, &format!("{i}-{t}"), &text.join(" "))
                .unwrap();
            b.rate(&soc, d, rng.random_range(0.1..1.0)).unwrap();
        }
    }
    b.build().unwrap().0
}

#[test]
fn planted_occupation_ranks_first() {
    let target = ["calibrate", "optical", "telescopes", "observatory"];
    let definition = CharacteristicDefinition::new("optics", vec![("t".into(), target.join(" "))]).unwrap();
    for seed in 0..10 {
        let planted = (seed as usize * 7) % 10;
        let catalog = planted_catalog(seed, planted, &target);
        let config = EmbedderConfig::hash(256, seed);
        let vectors = embed_catalog(&catalog, &config, None).unwrap();
        let occs = embed_occupations(&catalog, &vectors).unwrap();
        let char_vec = characteristic_embedding(&config, &definition, None).unwrap();
        let table = score_all(&occs, &char_vec, "optics").unwrap();
        let (top, _) = top_bottom(&table, 1).unwrap();
        assert_eq!(top[0].soc_code, catalog.occupations()[planted].soc_code, "seed {seed}");
    }
}

#[test]
fn fixture_scores_are_standardized_and_round_trip() {
    let (catalog, _) = parse_onet_tables(fixtures().join("onet_mini")).unwrap();
    let config = EmbedderConfig::hash(128, 3);
    let mut cache = EmbeddingCache::in_memory();
    let vectors = embed_catalog(&catalog, &config, Some(&mut cache)).unwrap();
    let occs = embed_occupations(&catalog, &vectors).unwrap();
    let def = load_characteristic(fixtures().join("characteristics/routine.def")).unwrap();
    let table = score_all(&occs, &characteristic_embedding(&config, &def, Some(&mut cache)).unwrap(), &def.name)
        .unwrap();
    let z: Vec<f64> = table.rows.iter().map(|r| r.z_score).collect();
    assert!(mean(&z).abs() < 1e-9);
    assert!((sample_sd(&z) - 1.0).abs() < 1e-9);

    let csv = table.to_csv();
    assert!(csv.starts_with(&format!("{SCORE_CSV_HEADER}\n")));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("routine.csv");
    std::fs::write(&path, &csv).unwrap();
    let back = ScoreTable::read_csv(&path, "routine").unwrap();
    assert_eq!(back.to_csv(), csv);
    let sorted: Vec<f64> = back.rows.iter().map(|r| r.z_score).collect();
    assert!(sorted.windows(2).all(|w| w[0] >= w[1]));
}

#[test]
fn nine_definitions_average_to_the_sum_over_nine() {
    let def = load_characteristic(fixtures().join("characteristics/artificial_intelligence.def")).unwrap();
    assert_eq!(def.definitions.len(), 9);
    let config = EmbedderConfig::hash(64, 11);
    let got = characteristic_embedding(&config, &def, None).unwrap();
    let mut sum = vec![0.0; 64];
    for text in &def.definitions {
        // Backend vectors are stored at single precision.
        let v = hash_embed(text, 64, 11).unwrap();
        for (s, x) in sum.iter_mut().zip(&v.values) {
            *s += f64::from(*x as f32);
        }
    }
    for (g, s) in got.values.iter().zip(&sum) {
        assert!((g - s / 9.0).abs() < 1e-12);
    }
    let charisma = load_characteristic(fixtures().join("characteristics/charisma.def")).unwrap();
    assert_eq!(charisma.definitions.len(), 5);
}
