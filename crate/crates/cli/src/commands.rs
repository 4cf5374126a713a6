use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use occ2vec::dimred::{pca_fit_transform, tsne, TsneConfig};
use occ2vec::embedding::{EmbedderConfig, EmbeddingCache, EmbeddingVector};
use occ2vec::mlm;
use occ2vec::occupation::{cached_catalog_vectors, characteristic_embedding, embed_catalog, embed_occupations, OccupationEmbedding};
use occ2vec::onet::{
    load_characteristic, load_labor_stats, parse_onet_tables, read_catalog, write_catalog, DescriptorCatalog, LaborStats,
};
use occ2vec::scoring::{score_all, top_bottom, ScoreTable};
use occ2vec::stats::{kendall_tau, local_poly_smooth, pearson, percentile_rank, spearman, standardize};
use occ2vec::task_measures::{all_element_ids, composite_task_measure, CompositeMeasure, ElementTable, TaskMeasure};
use occ2vec::validation::{attribute_panel, validate_panel, AttributePanel, GroupCorrelation};
use occ2vec::Error;

use crate::error::CliError;
use crate::output::{field, num, slug, Outputs};
use crate::svg::{self, BoxStats};

type Result<T> = std::result::Result<T, CliError>;

fn load_catalog(path: &Path) -> Result<DescriptorCatalog> {
    match read_catalog(path) {
        Err(Error::MissingFile(p)) => Err(CliError::missing_stage("ingest", format!("no catalog at {}", p.display()))),
        other => Ok(other?),
    }
}

fn open_cache(path: &Path) -> Result<EmbeddingCache> {
    if !path.is_file() {
        return Err(CliError::missing_stage("embed", format!("no embedding cache at {}", path.display())));
    }
    Ok(EmbeddingCache::open(path)?)
}

/// Descriptor vectors from the cache; every descriptor must be present.
fn catalog_vectors(
    catalog: &DescriptorCatalog,
    cache: &EmbeddingCache,
    config: &EmbedderConfig,
) -> Result<Vec<Option<EmbeddingVector>>> {
    let backend = config.backend_id();
    let vectors = cached_catalog_vectors(catalog, cache, &backend);
    let missing = vectors.iter().filter(|v| v.is_none()).count();
    if missing > 0 {
        return Err(CliError::missing_stage(
            "embed",
            format!(
                "cache lacks vectors for {missing} of {} descriptors under backend {backend}",
                vectors.len()
            ),
        ));
    }
    Ok(vectors)
}

fn occupation_vectors(catalog_path: &Path, cache_path: &Path, config: &EmbedderConfig) -> Result<(DescriptorCatalog, Vec<Option<EmbeddingVector>>, Vec<OccupationEmbedding>)> {
    let catalog = load_catalog(catalog_path)?;
    let cache = open_cache(cache_path)?;
    let vectors = catalog_vectors(&catalog, &cache, config)?;
    let occupations = embed_occupations(&catalog, &vectors)?;
    Ok((catalog, vectors, occupations))
}

fn file_stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "scores".into())
}

fn report_written(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

pub fn ingest(onet_dir: &Path, labor_stats: Option<&Path>, out: &Path, force: bool) -> Result<()> {
    if !force && out.exists() {
        return Err(CliError::Exists(out.to_path_buf()));
    }
    if !onet_dir.is_dir() {
        return Err(Error::MissingFile(onet_dir.to_path_buf()).into());
    }
    let (mut catalog, report) = parse_onet_tables(onet_dir)?;
    if let Some(path) = labor_stats {
        let labor = load_labor_stats(path)?;
        for code in labor.unknown_codes(&catalog) {
            eprintln!("note: labor statistics row {code} matches no catalog occupation");
        }
        catalog = catalog.with_education(&labor);
    }
    write_catalog(&catalog, out)?;
    println!("occupations: {}", report.occupations);
    for (category, count) in &report.descriptors_per_category {
        println!("  {category}: {count} descriptors");
    }
    if !report.dropped_occupations.is_empty() {
        println!("dropped (no ratings): {}", report.dropped_occupations.join(", "));
    }
    if report.unrated_tasks > 0 {
        println!("unrated task statements skipped: {}", report.unrated_tasks);
    }
    println!("wrote {}", out.display());
    Ok(())
}

pub fn embed(catalog_path: &Path, cache_path: &Path, characteristics: &[PathBuf], config: &EmbedderConfig) -> Result<()> {
    let catalog = load_catalog(catalog_path)?;
    let definitions = characteristics.iter().map(load_characteristic).collect::<occ2vec::Result<Vec<_>>>()?;
    let mut cache = EmbeddingCache::open(cache_path)?;
    let before = cache.len();
    embed_catalog(&catalog, config, Some(&mut cache))?;
    for def in &definitions {
        characteristic_embedding(config, def, Some(&mut cache))?;
    }
    cache.save()?;
    println!(
        "backend {}: {} descriptors, {} characteristics, {} new cache entries ({} total)",
        config.backend_id(),
        catalog.descriptors().len(),
        definitions.len(),
        cache.len() - before,
        cache.len()
    );
    Ok(())
}

pub fn score(
    catalog_path: &Path,
    cache_path: &Path,
    characteristic: &Path,
    config: &EmbedderConfig,
    out: &Path,
    force: bool,
) -> Result<()> {
    let def = load_characteristic(characteristic)?;
    let (_, _, occupations) = occupation_vectors(catalog_path, cache_path, config)?;
    // Read-only: definitions missing from the cache are embedded but not stored.
    let mut cache = open_cache(cache_path)?;
    let target = characteristic_embedding(config, &def, Some(&mut cache))?;
    let table = score_all(&occupations, &target, &def.name)?;
    let mut outputs = Outputs::new();
    outputs.add(out, table.to_csv());
    report_written(&outputs.commit(force)?);
    Ok(())
}

pub enum PanelSource {
    File(PathBuf),
    Build { catalog: PathBuf, cache: PathBuf, config: EmbedderConfig },
}

fn correlations_csv(key: &str, rows: &[GroupCorrelation]) -> String {
    let mut s = format!("{key},n,r\n");
    for g in rows {
        let _ = writeln!(s, "{},{},{}", field(&g.key), g.n, num(g.r));
    }
    s
}

pub fn validate(source: PanelSource, alpha: f64, out: &Path, force: bool) -> Result<()> {
    let mut outputs = Outputs::new();
    let panel = match source {
        PanelSource::File(path) => AttributePanel::read_csv(path)?,
        PanelSource::Build { catalog, cache, config } => {
            let (catalog, vectors, occupations) = occupation_vectors(&catalog, &cache, &config)?;
            let panel = attribute_panel(&catalog, &occupations, &vectors)?;
            outputs.add(out.join("panel.csv"), panel.to_csv());
            panel
        }
    };
    let report = validate_panel(&panel, alpha)?;
    outputs.add(out.join("correlations_between.csv"), correlations_csv("element_id", &report.between));
    outputs.add(out.join("correlations_within.csv"), correlations_csv("soc_code", &report.within));

    let mut ttest = String::from("panel,rho0,mean,t_stat,p_value,df\n");
    let mut summary = String::from("panel,groups,skipped,mean_r,first_non_rejected,alpha,note\n");
    for (name, groups, skipped, sweep) in [
        ("between", &report.between, &report.skipped_between, &report.between_sweep),
        ("within", &report.within, &report.skipped_within, &report.within_sweep),
    ] {
        let mean_r = if groups.is_empty() {
            String::new()
        } else {
            num(groups.iter().map(|g| g.r).sum::<f64>() / groups.len() as f64)
        };
        match sweep {
            Ok(s) => {
                for r in &s.results {
                    let _ = writeln!(
                        ttest,
                        "{name},{:.2},{},{},{:.6e},{}",
                        r.rho0,
                        num(r.mean),
                        num(r.t_stat),
                        r.p_value,
                        r.df
                    );
                }
                let first = s.first_non_rejected.map(|v| format!("{v:.2}")).unwrap_or_default();
                let _ = writeln!(summary, "{name},{},{},{mean_r},{first},{alpha},", groups.len(), skipped.len());
            }
            Err(reason) => {
                let _ = writeln!(summary, "{name},{},{},{mean_r},,{alpha},{}", groups.len(), skipped.len(), field(reason));
            }
        }
    }
    outputs.add(out.join("ttest.csv"), ttest);
    outputs.add(out.join("sweep_summary.csv"), summary);

    let mut reg = String::from(
        "occupation_fe,descriptor_fe,category_fe,coefficient,robust_se,t_stat,r2,adj_r2,n_obs,n_params\n",
    );
    for (spec, r) in &report.regressions {
        let _ = writeln!(
            reg,
            "{},{},{},{},{},{},{},{}",
            spec.label(),
            num(r.coefficient),
            num(r.robust_se),
            num(r.t_stat),
            num(r.r2),
            num(r.adj_r2),
            r.n_obs,
            r.n_params
        );
    }
    outputs.add(out.join("regressions.csv"), reg);
    report_written(&outputs.commit(force)?);
    Ok(())
}

fn education_label(catalog: &DescriptorCatalog, labor: Option<&LaborStats>, occupation: usize) -> String {
    let occ = &catalog.occupations()[occupation];
    labor
        .and_then(|l| l.get(&occ.soc_code))
        .and_then(|e| e.education)
        .or(occ.education)
        .map(|e| e.label().to_string())
        .unwrap_or_else(|| "Unknown".into())
}

/// Distinct labels in first-seen order of `order`, plus each item's index.
fn group_index(labels: &[String], order: impl Fn(&str) -> String) -> (Vec<String>, Vec<usize>) {
    let mut keys: Vec<(String, String)> = labels.iter().map(|l| (order(l), l.clone())).collect();
    keys.sort();
    keys.dedup();
    let names: Vec<String> = keys.into_iter().map(|(_, l)| l).collect();
    let idx = labels.iter().map(|l| names.iter().position(|n| n == l).expect("present")).collect();
    (names, idx)
}

fn education_rank(label: &str) -> String {
    let rank = occ2vec::onet::Education::parse(label).map(|e| e as usize).unwrap_or(99);
    format!("{rank:02}")
}

#[allow(clippy::too_many_arguments)]
pub fn reduce(
    catalog_path: &Path,
    cache_path: &Path,
    labor_stats: Option<&Path>,
    config: &EmbedderConfig,
    pca_dims: usize,
    tsne_config: &TsneConfig,
    out: &Path,
    force: bool,
) -> Result<()> {
    let labor = labor_stats.map(load_labor_stats).transpose()?;
    let (catalog, _, occupations) = occupation_vectors(catalog_path, cache_path, config)?;
    let data: Vec<Vec<f64>> = occupations.iter().map(|o| o.vector.values.clone()).collect();
    let n = data.len();
    let k = pca_dims.min(n.saturating_sub(1)).min(config.dim);
    let (pca, scores) = pca_fit_transform(&data, k)?;
    let result = tsne(&scores, tsne_config)?;

    let groups: Vec<String> = catalog.occupations().iter().map(|o| o.major_group_title().to_string()).collect();
    let education: Vec<String> = (0..n).map(|i| education_label(&catalog, labor.as_ref(), i)).collect();
    let mut csv = String::from("soc_code,x,y,major_group_title,education\n");
    for (i, occ) in catalog.occupations().iter().enumerate() {
        let [x, y] = result.coords[i];
        let _ = writeln!(csv, "{},{},{},{},{}", occ.soc_code, num(x), num(y), field(&groups[i]), field(&education[i]));
    }
    let mut outputs = Outputs::new();
    outputs.add(out.join("coords.csv"), csv);
    let (group_names, group_idx) = group_index(&groups, |l| l.to_string());
    let (edu_names, edu_idx) = group_index(&education, education_rank);
    let points = |idx: &[usize]| -> Vec<(f64, f64, usize)> {
        result.coords.iter().zip(idx).map(|(c, &g)| (c[0], c[1], g)).collect()
    };
    outputs.add(
        out.join("tsne_major_group.svg"),
        svg::scatter("Occupation embeddings by major group", &points(&group_idx), &group_names),
    );
    outputs.add(
        out.join("tsne_education.svg"),
        svg::scatter("Occupation embeddings by education", &points(&edu_idx), &edu_names),
    );
    let written = outputs.commit(force)?;
    let explained: f64 = pca.explained_variance.iter().sum::<f64>() / pca.total_variance;
    println!(
        "PCA to {k} dimensions ({:.1}% of variance); t-SNE KL {:.4} -> {:.4}",
        100.0 * explained,
        result.initial_kl,
        result.final_kl
    );
    report_written(&written);
    Ok(())
}

pub enum CompareTarget {
    External(PathBuf),
    TaskMeasure { measure: TaskMeasure, catalog: PathBuf },
}

/// First column SOC code, second column the measure; blank or
/// non-numeric cells are skipped.
fn read_external(path: &Path) -> Result<(String, BTreeMap<String, f64>)> {
    if !path.is_file() {
        return Err(Error::MissingFile(path.to_path_buf()).into());
    }
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path).map_err(Error::from)?;
    let headers = reader.headers().map_err(Error::from)?.clone();
    if headers.len() < 2 {
        return Err(CliError::Usage(format!("{}: need a SOC code column and a value column", path.display())));
    }
    let mut values = BTreeMap::new();
    for rec in reader.records() {
        let rec = rec.map_err(Error::from)?;
        if let Ok(v) = rec[1].parse::<f64>() {
            if v.is_finite() {
                values.insert(rec[0].to_string(), v);
            }
        }
    }
    Ok((headers[1].to_string(), values))
}

fn lookup<'a>(values: &'a BTreeMap<String, f64>, soc: &str) -> Option<&'a f64> {
    values.get(soc).or_else(|| soc.get(..7).and_then(|base| values.get(base)))
}

fn composite_measures(catalog: &DescriptorCatalog) -> occ2vec::Result<Vec<CompositeMeasure>> {
    let table = ElementTable::from_catalog(catalog, &all_element_ids())?;
    TaskMeasure::ALL.iter().map(|&m| composite_task_measure(&table, m)).collect()
}

pub fn compare(scores_path: &Path, target: CompareTarget, out: &Path, force: bool) -> Result<()> {
    let name = file_stem(scores_path);
    let table = match ScoreTable::read_csv(scores_path, &name) {
        Err(Error::MissingFile(p)) => {
            return Err(CliError::missing_stage("score", format!("no score table at {}", p.display())))
        }
        other => other?,
    };
    let (measure_name, values) = match target {
        CompareTarget::External(path) => read_external(&path)?,
        CompareTarget::TaskMeasure { measure, catalog } => {
            let catalog = load_catalog(&catalog)?;
            let m = composite_task_measure(&ElementTable::from_catalog(&catalog, &all_element_ids())?, measure)?;
            (measure.as_str().to_string(), m.soc_codes.into_iter().zip(m.values).collect())
        }
    };
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for row in &table.rows {
        if let Some(&v) = lookup(&values, &row.soc_code) {
            xs.push(row.z_score);
            ys.push(v);
        }
    }
    if xs.len() < 3 {
        return Err(CliError::Usage(format!(
            "only {} occupations of {name} match {measure_name}; need at least 3",
            xs.len()
        )));
    }
    let (xs, ys) = (standardize(&xs)?, standardize(&ys)?);
    let mut csv = String::from("characteristic,measure,method,n,value\n");
    for (method, value) in [
        ("pearson", pearson(&xs, &ys)?),
        ("spearman", spearman(&xs, &ys)?),
        ("kendall", kendall_tau(&xs, &ys)?),
    ] {
        let _ = writeln!(csv, "{},{},{method},{},{}", field(&name), field(&measure_name), xs.len(), num(value));
    }
    let mut outputs = Outputs::new();
    outputs.add(out, csv);
    report_written(&outputs.commit(force)?);
    Ok(())
}

fn box_csv(boxes: &[BoxStats]) -> String {
    let mut s = String::from("group,n,q1,median,q3,lower_whisker,upper_whisker,outliers\n");
    for b in boxes {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            field(&b.label),
            b.n,
            num(b.q1),
            num(b.median),
            num(b.q3),
            num(b.lower_whisker),
            num(b.upper_whisker),
            b.outliers.len()
        );
    }
    s
}

fn grouped_boxes(labels: &[(String, String, f64)]) -> Vec<BoxStats> {
    let mut groups: BTreeMap<(&str, &str), Vec<f64>> = BTreeMap::new();
    for (order, label, v) in labels {
        groups.entry((order, label)).or_default().push(*v);
    }
    groups.into_iter().filter_map(|((_, label), v)| BoxStats::new(label, &v)).collect()
}

/// Smoothed standardized values against the percentile rank of `x`.
fn smooth_series(x: &[f64], y: &[f64], bandwidth: f64) -> occ2vec::Result<Vec<(f64, f64)>> {
    let curve = local_poly_smooth(&percentile_rank(x)?, &standardize(y)?, 2, bandwidth)?;
    Ok(curve.grid_x.into_iter().zip(curve.fitted_y).collect())
}

fn curve_csv(points: &[(f64, f64)]) -> String {
    let mut s = String::from("percentile,fit\n");
    for (x, y) in points {
        let _ = writeln!(s, "{x:.0},{}", num(*y));
    }
    s
}

pub fn report(
    score_paths: &[PathBuf],
    catalog_path: &Path,
    labor_path: &Path,
    bandwidth: f64,
    top: usize,
    out: &Path,
    force: bool,
) -> Result<()> {
    let catalog = load_catalog(catalog_path)?;
    let labor = load_labor_stats(labor_path)?;
    let mut outputs = Outputs::new();
    let mut wage_series = Vec::new();
    let mut growth_series = Vec::new();

    let mut push_curves = |name: &str, soc_values: &[(String, f64)], outputs: &mut Outputs| -> Result<()> {
        for (var, series) in [("wage", &mut wage_series), ("growth", &mut growth_series)] {
            let (mut x, mut y) = (Vec::new(), Vec::new());
            for (soc, v) in soc_values {
                let entry = labor.get(soc);
                let xv = match var {
                    "wage" => entry.and_then(|e| e.median_annual_wage),
                    _ => entry.and_then(|e| e.employment_growth_pct),
                };
                if let Some(xv) = xv {
                    x.push(xv);
                    y.push(*v);
                }
            }
            match smooth_series(&x, &y, bandwidth) {
                Ok(points) => {
                    outputs.add(out.join(format!("smooth_{}_{var}.csv", slug(name))), curve_csv(&points));
                    series.push((name.to_string(), points));
                }
                Err(e) => eprintln!("note: no {var} curve for {name}: {e}"),
            }
        }
        Ok(())
    };

    for path in score_paths {
        let name = file_stem(path);
        let table = match ScoreTable::read_csv(path, &name) {
            Err(Error::MissingFile(p)) => {
                return Err(CliError::missing_stage("score", format!("no score table at {}", p.display())))
            }
            other => other?,
        };
        let (best, worst) = top_bottom(&table, top.min(table.rows.len()).max(1))?;
        let mut tb = String::from("side,rank,soc_code,title,z_score\n");
        for (side, rows) in [("top", &best), ("bottom", &worst)] {
            for (i, r) in rows.iter().enumerate() {
                let _ = writeln!(tb, "{side},{},{},{},{}", i + 1, r.soc_code, field(&r.title), num(r.z_score));
            }
        }
        outputs.add(out.join(format!("top_bottom_{}.csv", slug(&name))), tb);

        let mut by_group = Vec::new();
        let mut by_edu = Vec::new();
        for r in &table.rows {
            let group = labor
                .get(&r.soc_code)
                .map(|e| e.major_group_title.clone())
                .or_else(|| {
                    catalog.occupation_index(&r.soc_code).map(|i| catalog.occupations()[i].major_group_title().to_string())
                })
                .unwrap_or_else(|| "Unknown".into());
            by_group.push((group.clone(), group, r.z_score));
            let edu = catalog
                .occupation_index(&r.soc_code)
                .map(|i| education_label(&catalog, Some(&labor), i))
                .unwrap_or_else(|| "Unknown".into());
            by_edu.push((education_rank(&edu), edu, r.z_score));
        }
        for (kind, rows) in [("major_group", by_group), ("education", by_edu)] {
            let boxes = grouped_boxes(&rows);
            outputs.add(out.join(format!("boxplot_{}_{kind}.csv", slug(&name))), box_csv(&boxes));
            outputs.add(
                out.join(format!("boxplot_{}_{kind}.svg", slug(&name))),
                svg::boxplot(&format!("{name} by {}", kind.replace('_', " ")), "standardized score", &boxes),
            );
        }
        let soc_values: Vec<(String, f64)> = table.rows.iter().map(|r| (r.soc_code.clone(), r.z_score)).collect();
        push_curves(&name, &soc_values, &mut outputs)?;
    }

    match composite_measures(&catalog) {
        Ok(measures) => {
            let mut csv = String::from("soc_code,title,abstract,manual,routine\n");
            for (i, occ) in catalog.occupations().iter().enumerate() {
                let _ = write!(csv, "{},{}", occ.soc_code, field(&occ.title));
                for m in &measures {
                    let _ = write!(csv, ",{}", num(m.values[i]));
                }
                csv.push('\n');
            }
            outputs.add(out.join("task_measures.csv"), csv);
            for m in &measures {
                let soc_values: Vec<(String, f64)> =
                    m.soc_codes.iter().cloned().zip(m.values.iter().copied()).collect();
                push_curves(&format!("{} tasks", m.measure.as_str()), &soc_values, &mut outputs)?;
            }
        }
        Err(e) => eprintln!("note: composite task measures unavailable: {e}"),
    }

    for (var, series, label) in [
        ("wage", &wage_series, "percentile of median wage"),
        ("growth", &growth_series, "percentile of employment growth"),
    ] {
        if !series.is_empty() {
            outputs.add(
                out.join(format!("smooth_{var}.svg")),
                svg::lines(&format!("Smoothed standardized measures by {var} rank"), label, "standardized value", series),
            );
        }
    }
    report_written(&outputs.commit(force)?);
    Ok(())
}

pub fn mlm_demo(seed: u64, first: &str, second: &str) -> Result<()> {
    let a: Vec<&str> = first.split_whitespace().collect();
    let b: Vec<&str> = second.split_whitespace().collect();
    let mut words: Vec<&str> = a.iter().chain(&b).copied().collect();
    words.sort_unstable();
    words.dedup();
    let vocab = mlm::Vocabulary::new(&words)?;
    let max_tokens = mlm::BERT_LARGE.max_tokens;
    let seq = mlm::tokenize_pair(&a, &b, max_tokens)?;
    println!("vocabulary: {} tokens", vocab.len());
    println!("{:<4} {:<12} {:>5} {:>8} {:>8}", "#", "token", "index", "position", "sequence");
    for (i, t) in seq.iter().enumerate() {
        println!(
            "{:<4} {:<12} {:>5} {:>8} {:>8}",
            i,
            t,
            vocab.lookup(t)?,
            mlm::position_of(i, &seq)?,
            mlm::sequence_of(i, &seq)?
        );
    }
    let tables = mlm::EmbeddingTables::random(vocab.len(), max_tokens + 2, 8, seed);
    let e0 = mlm::input_embedding(1, &seq, &vocab, &tables)?;
    println!("input embedding of `{}`: [{}]", seq[1], e0.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>().join(", "));

    let masked = mlm::apply_mlm_mask(&seq, &vocab, seed, mlm::SELECT_RATE)?;
    println!("masked: {}", masked.tokens.join(" "));
    for (i, action) in &masked.selections {
        println!("  token {i} `{}`: {action:?}", seq[*i]);
    }
    let uniform = vec![1.0 / vocab.len() as f64; vocab.len()];
    let ce = mlm::mlm_cross_entropy(&uniform, vocab.lookup(&seq[1])?)?;
    println!("loss under a uniform prediction: {:.6} (ln |V| = {:.6})", ce.loss, (vocab.len() as f64).ln());
    Ok(())
}
