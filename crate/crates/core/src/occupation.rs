//! Occupation vectors: a weighted mean of descriptor vectors inside each
//! category, then a plain mean over the categories an occupation has.
//!
//! For occupation i with K present categories,
//! Y_i = (1/K) Σ_k Σ_j W_{i,k,j} X_{i,k,j}.

use std::collections::BTreeMap;

use crate::embedding::{embed_texts, EmbedderConfig, EmbeddingCache, EmbeddingVector};
use crate::error::{Error, Result};
use crate::onet::{Category, CharacteristicDefinition, DescriptorCatalog};

/// Descriptor vectors indexed like [`DescriptorCatalog::descriptors`];
/// `None` marks a descriptor that has not been embedded.
pub type DescriptorVectors = [Option<EmbeddingVector>];

#[derive(Debug, Clone, PartialEq)]
pub struct OccupationEmbedding {
    pub soc_code: String,
    pub title: String,
    pub vector: EmbeddingVector,
    pub category_vectors: BTreeMap<Category, EmbeddingVector>,
}

/// Embeds every descriptor text of the catalog.
pub fn embed_catalog(
    catalog: &DescriptorCatalog,
    config: &EmbedderConfig,
    cache: Option<&mut EmbeddingCache>,
) -> Result<Vec<Option<EmbeddingVector>>> {
    let texts: Vec<&str> = catalog.descriptors().iter().map(|d| d.text.as_str()).collect();
    Ok(embed_texts(config, &texts, cache)?.into_iter().map(Some).collect())
}

/// Looks descriptor vectors up in a cache without computing anything.
pub fn cached_catalog_vectors(
    catalog: &DescriptorCatalog,
    cache: &EmbeddingCache,
    backend_id: &str,
) -> Vec<Option<EmbeddingVector>> {
    catalog
        .descriptors()
        .iter()
        .map(|d| cache.get(backend_id, &crate::embedding::source_key(&d.text)))
        .collect()
}

pub fn category_embedding(
    catalog: &DescriptorCatalog,
    vectors: &DescriptorVectors,
    occupation: usize,
    category: Category,
) -> Result<EmbeddingVector> {
    let soc = &catalog.occupations()[occupation].soc_code;
    let bundle = catalog.bundle(occupation, category).ok_or_else(|| {
        Error::InvalidInput(format!("occupation {soc} has no {category} descriptors"))
    })?;
    let mut sum: Option<Vec<f64>> = None;
    let mut backend_id = String::new();
    for w in bundle {
        let v = vectors
            .get(w.descriptor)
            .and_then(Option::as_ref)
            .ok_or_else(|| Error::MissingVector(catalog.descriptor(w.descriptor).element_id.clone()))?;
        let acc = sum.get_or_insert_with(|| vec![0.0; v.dim()]);
        if acc.len() != v.dim() {
            return Err(Error::DimensionMismatch { expected: acc.len(), actual: v.dim() });
        }
        for (a, x) in acc.iter_mut().zip(&v.values) {
            *a += w.weight * x;
        }
        backend_id.clone_from(&v.backend_id);
    }
    let values = sum.expect("bundles are nonempty");
    Ok(EmbeddingVector::derived(values, format!("{soc}/{category}"), &backend_id))
}

pub fn occupation_embedding(category_vectors: &BTreeMap<Category, EmbeddingVector>) -> Result<EmbeddingVector> {
    let mut iter = category_vectors.values();
    let first = iter
        .next()
        .ok_or_else(|| Error::InvalidInput("no category vectors to average".into()))?;
    let mut sum = first.values.clone();
    for v in iter {
        if v.dim() != sum.len() {
            return Err(Error::DimensionMismatch { expected: sum.len(), actual: v.dim() });
        }
        for (a, x) in sum.iter_mut().zip(&v.values) {
            *a += x;
        }
    }
    let k = category_vectors.len() as f64;
    for a in &mut sum {
        *a /= k;
    }
    let source = first.source_key.split('/').next().unwrap_or_default().to_string();
    Ok(EmbeddingVector::derived(sum, source, &first.backend_id))
}

/// Embeddings of every catalog occupation, in catalog order.
pub fn embed_occupations(
    catalog: &DescriptorCatalog,
    vectors: &DescriptorVectors,
) -> Result<Vec<OccupationEmbedding>> {
    catalog
        .occupations()
        .iter()
        .enumerate()
        .map(|(i, occ)| {
            let category_vectors = catalog
                .categories_of(i)
                .into_iter()
                .map(|cat| Ok((cat, category_embedding(catalog, vectors, i, cat)?)))
                .collect::<Result<BTreeMap<_, _>>>()?;
            Ok(OccupationEmbedding {
                soc_code: occ.soc_code.clone(),
                title: occ.title.clone(),
                vector: occupation_embedding(&category_vectors)?,
                category_vectors,
            })
        })
        .collect()
}

/// Mean of the embeddings of a characteristic's definitions.
pub fn characteristic_embedding(
    config: &EmbedderConfig,
    characteristic: &CharacteristicDefinition,
    cache: Option<&mut EmbeddingCache>,
) -> Result<EmbeddingVector> {
    if characteristic.definitions.is_empty() {
        return Err(Error::InvalidInput(format!(
            "characteristic `{}` has no definitions",
            characteristic.name
        )));
    }
    let texts: Vec<&str> = characteristic.definitions.iter().map(String::as_str).collect();
    let vectors = embed_texts(config, &texts, cache)?;
    Ok(mean_vector(&vectors, &characteristic.name))
}

fn mean_vector(vectors: &[EmbeddingVector], name: &str) -> EmbeddingVector {
    let mut sum = vec![0.0; vectors[0].dim()];
    for v in vectors {
        for (a, x) in sum.iter_mut().zip(&v.values) {
            *a += x;
        }
    }
    let n = vectors.len() as f64;
    for a in &mut sum {
        *a /= n;
    }
    EmbeddingVector::derived(sum, format!("characteristic/{name}"), &vectors[0].backend_id)
}
