//! Single-file catalog container.
//!
//! Layout: the 8 magic bytes `OCAT0001`, a little-endian `u32` record count,
//! then that many records, each a little-endian `u32` byte length followed
//! by a UTF-8 payload.  Payloads are tab-separated with a leading tag:
//!
//! ```text
//! catalog     <format version> <occupations> <descriptors> <bundles>
//! occupation  <soc_code> <title> <education label or "-">
//! descriptor  <kind> <category> <element_id> <text>
//! bundle      <occupation index> <category> <desc>:<weight>:<score>,...
//! dropped     <soc_code> <category>
//! ```
//!
//! Floats are written in Rust's shortest round-trip form, so reading a file
//! back yields bit-identical weights.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use super::{
    Category, DescriptorCatalog, DescriptorKind, Education, Occupation, WeightedDescriptor,
};
use crate::error::{Error, Result};

pub const CATALOG_MAGIC: &[u8; 8] = b"OCAT0001";
const FORMAT_VERSION: &str = "1";

fn encode(catalog: &DescriptorCatalog) -> Vec<String> {
    let mut records = vec![format!(
        "catalog\t{FORMAT_VERSION}\t{}\t{}\t{}",
        catalog.occupations.len(),
        catalog.descriptors.len(),
        catalog.bundles.len()
    )];
    for o in &catalog.occupations {
        let edu = o.education.map(|e| e.label()).unwrap_or("-");
        records.push(format!("occupation\t{}\t{}\t{edu}", o.soc_code, o.title));
    }
    for d in &catalog.descriptors {
        records.push(format!(
            "descriptor\t{}\t{}\t{}\t{}",
            d.kind.as_str(),
            d.category,
            d.element_id,
            d.text
        ));
    }
    for (&(occ, category), items) in &catalog.bundles {
        let body: Vec<String> = items
            .iter()
            .map(|w| format!("{}:{}:{}", w.descriptor, w.weight, w.score))
            .collect();
        records.push(format!("bundle\t{occ}\t{category}\t{}", body.join(",")));
    }
    for (soc, category) in &catalog.dropped {
        records.push(format!("dropped\t{soc}\t{category}"));
    }
    records
}

pub fn catalog_to_bytes(catalog: &DescriptorCatalog) -> Vec<u8> {
    let records = encode(catalog);
    let mut out = Vec::with_capacity(64 + records.iter().map(|r| r.len() + 4).sum::<usize>());
    out.extend_from_slice(CATALOG_MAGIC);
    out.extend_from_slice(&(records.len() as u32).to_le_bytes());
    for r in &records {
        out.extend_from_slice(&(r.len() as u32).to_le_bytes());
        out.extend_from_slice(r.as_bytes());
    }
    out
}

pub fn write_catalog(catalog: &DescriptorCatalog, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, catalog_to_bytes(catalog))?;
    Ok(())
}

pub fn read_catalog(path: impl AsRef<Path>) -> Result<DescriptorCatalog> {
    let path = path.as_ref();
    if !path.is_file() {
        return Err(Error::MissingFile(path.to_path_buf()));
    }
    let bytes = fs::read(path)?;
    catalog_from_bytes(&bytes, path)
}

pub(crate) fn catalog_from_bytes(bytes: &[u8], path: &Path) -> Result<DescriptorCatalog> {
    let corrupt = |offset: usize, message: &str| Error::Corrupt {
        path: path.to_path_buf(),
        offset: offset as u64,
        message: message.to_string(),
    };
    if bytes.len() < 12 || &bytes[..8] != CATALOG_MAGIC {
        return Err(corrupt(0, "bad magic, expected OCAT0001"));
    }
    let count = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let mut pos = 12;
    let mut records = Vec::with_capacity(count);
    for _ in 0..count {
        if pos + 4 > bytes.len() {
            return Err(corrupt(pos, "truncated record length"));
        }
        let len = u32::from_le_bytes(bytes[pos..pos + 4].try_into().unwrap()) as usize;
        let start = pos + 4;
        if start + len > bytes.len() {
            return Err(corrupt(pos, "record length exceeds file size"));
        }
        let text = std::str::from_utf8(&bytes[start..start + len])
            .map_err(|_| corrupt(start, "record is not UTF-8"))?;
        records.push((start, text));
        pos = start + len;
    }
    if pos != bytes.len() {
        return Err(corrupt(pos, "trailing bytes after last record"));
    }

    let mut occupations = Vec::new();
    let mut descriptors = Vec::new();
    let mut bundles = BTreeMap::new();
    let mut dropped = Vec::new();
    let mut header_seen = false;
    for (offset, record) in records {
        let fields: Vec<&str> = record.split('\t').collect();
        let bad = |m: &str| corrupt(offset, m);
        match (fields[0], fields.len()) {
            ("catalog", 5) => {
                if fields[1] != FORMAT_VERSION {
                    return Err(bad("unsupported catalog format version"));
                }
                header_seen = true;
            }
            ("occupation", 4) => {
                let mut o = Occupation::new(fields[1], fields[2])
                    .map_err(|_| bad("invalid occupation record"))?;
                if fields[3] != "-" {
                    o.education = Some(
                        Education::parse(fields[3]).ok_or_else(|| bad("invalid education"))?,
                    );
                }
                occupations.push(o);
            }
            ("descriptor", 5) => {
                descriptors.push(super::Descriptor {
                    kind: fields[1].parse::<DescriptorKind>().map_err(|_| bad("bad kind"))?,
                    category: fields[2].parse::<Category>().map_err(|_| bad("bad category"))?,
                    element_id: fields[3].to_string(),
                    text: fields[4].to_string(),
                });
            }
            ("bundle", 4) => {
                let occ: usize = fields[1].parse().map_err(|_| bad("bad occupation index"))?;
                let category: Category = fields[2].parse().map_err(|_| bad("bad category"))?;
                let mut items = Vec::new();
                for entry in fields[3].split(',') {
                    let parts: Vec<&str> = entry.split(':').collect();
                    if parts.len() != 3 {
                        return Err(bad("bad bundle entry"));
                    }
                    items.push(WeightedDescriptor {
                        descriptor: parts[0].parse().map_err(|_| bad("bad descriptor index"))?,
                        weight: parts[1].parse().map_err(|_| bad("bad weight"))?,
                        score: parts[2].parse().map_err(|_| bad("bad score"))?,
                    });
                }
                bundles.insert((occ, category), items);
            }
            ("dropped", 3) => {
                let category: Category = fields[2].parse().map_err(|_| bad("bad category"))?;
                dropped.push((fields[1].to_string(), category));
            }
            _ => return Err(bad("unrecognized record")),
        }
    }
    if !header_seen {
        return Err(corrupt(12, "missing catalog header record"));
    }
    let catalog = DescriptorCatalog {
        occupations,
        descriptors,
        bundles,
        dropped,
    };
    catalog.validate().map_err(|e| corrupt(12, &e.to_string()))?;
    Ok(catalog)
}
