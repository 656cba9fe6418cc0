//! JSON encodings shared by the CLI and the bindings.
//!
//! Input documents use one flat schema; each command reads the fields it
//! needs. Exact rationals are written as strings (`"3/4"`) or integers.
//! Cochains are maps keyed by comma-joined vertex tuples (`"0,1,2"`).

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize, Serializer};

use crate::algebra_core::{format_rational, parse_rational, IntMatrix, RatMatrix, RatVector};
use crate::cech::{AbelianCoefficients, Cochain, GroupCochain, GroupExtensionData, Nerve};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::lie::{InvariantForm, LieAlgebra};
use crate::orbifold::{ChartAtlas, ComplexMatrix, ToralAction};

pub(crate) fn ser_rat_vec<S: Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

pub(crate) fn ser_rat<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

/// An exact scalar, or a group element, as it appears in a document.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize, Serialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    pub fn to_rational(&self) -> Result<BigRational> {
        match self {
            Scalar::Int(i) => Ok(BigRational::from_integer((*i).into())),
            Scalar::Text(s) => parse_rational(s),
        }
    }

    /// Integers are element indices, strings are labels.
    pub fn to_element(&self, group: &FiniteGroup) -> Result<usize> {
        match self {
            Scalar::Int(i) => usize::try_from(*i)
                .ok()
                .filter(|&g| g < group.order())
                .ok_or_else(|| Error::OutOfRange(format!("element {i} in a group of order {}", group.order()))),
            Scalar::Text(s) => group
                .index_of(s)
                .ok_or_else(|| Error::Parse(format!("unknown group element {s:?}"))),
        }
    }
}

pub type MatrixDoc = Vec<Vec<Scalar>>;
pub type CochainDoc = BTreeMap<String, Scalar>;

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDoc {
    pub basis: Vec<String>,
    /// `"x,y" -> {"z": "1"}` means `[x, y] = z`.
    #[serde(default)]
    pub brackets: BTreeMap<String, BTreeMap<String, Scalar>>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct GroupDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutations: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclic: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetric: Option<usize>,
    /// Integer matrices generating a finite matrix group (for actions).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<BTreeMap<String, Vec<Vec<i64>>>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct HomDoc {
    pub x: usize,
    pub y: usize,
    pub map: Vec<Scalar>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TwistDoc {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub c: Scalar,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(untagged)]
pub enum ExtensionDoc {
    Named(String),
    Explicit {
        h: GroupDoc,
        l_prime: GroupDoc,
        l: GroupDoc,
        inclusion: Vec<usize>,
        projection: Vec<usize>,
        section: Vec<usize>,
    },
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    /// Default command for fixtures, e.g. `"lie betti"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    /// Expected run status for fixtures: `ok` or `check-failed`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<String>,

    // Lie algebras.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<AlgebraDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub form: Option<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivation: Option<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<AlgebraDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<AlgebraDoc>,
    /// Rows are the images of the base basis vectors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<MatrixDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morphism: Option<MatrixDoc>,

    // Groups and orbifolds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<GroupDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, rename = "rho_Z", skip_serializing_if = "Option::is_none")]
    pub rho_z: Option<BTreeMap<String, Vec<Vec<i64>>>>,
    #[serde(default, rename = "rho_C", skip_serializing_if = "Option::is_none")]
    pub rho_c: Option<BTreeMap<String, Vec<Vec<[f64; 2]>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub element: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub charts: Option<Vec<GroupDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homs: Option<Vec<HomDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twists: Option<Vec<TwistDoc>>,

    // Nerves and cochains.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub facets: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cochain: Option<CochainDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cochain_prime: Option<CochainDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<CochainDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<CochainDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<CochainDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ustar: Option<CochainDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cstar: Option<CochainDoc>,
    /// Automorphism of the band per edge, as the image list of `0..|H|`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<BTreeMap<String, Vec<Scalar>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<GroupDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<Scalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<ExtensionDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub orientation: Option<Vec<i8>>,

    // Matrix-valued constant data on a nerve.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<BTreeMap<String, MatrixDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connection: Option<BTreeMap<String, MatrixDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transition: Option<BTreeMap<String, MatrixDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub twist: Option<BTreeMap<String, MatrixDoc>>,
}

pub fn parse_document(text: &str) -> Result<Document> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub(crate) fn require<'a, T>(field: &'a Option<T>, name: &str) -> Result<&'a T> {
    field
        .as_ref()
        .ok_or_else(|| Error::MissingData(format!("document has no {name:?} field")))
}

pub fn parse_tuple(key: &str) -> Result<Vec<usize>> {
    key.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad simplex key {key:?}"))))
        .collect()
}

pub fn tuple_key(t: &[usize]) -> String {
    t.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

pub fn rat_matrix(doc: &MatrixDoc) -> Result<RatMatrix> {
    let rows = doc
        .iter()
        .map(|r| r.iter().map(Scalar::to_rational).collect::<Result<RatVector>>())
        .collect::<Result<Vec<_>>>()?;
    RatMatrix::from_rows(rows)
}

pub fn int_matrix(rows: &[Vec<i64>]) -> Result<IntMatrix> {
    IntMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect())
}

pub fn algebra(doc: &AlgebraDoc) -> Result<LieAlgebra> {
    let n = doc.basis.len();
    let position = |name: &str| {
        doc.basis
            .iter()
            .position(|b| b == name)
            .ok_or_else(|| Error::Parse(format!("unknown basis element {name:?}")))
    };
    let mut brackets = Vec::new();
    for (key, value) in &doc.brackets {
        let parts: Vec<&str> = key.split(',').map(str::trim).collect();
        let [x, y] = parts.as_slice() else {
            return Err(Error::Parse(format!("bracket key {key:?} must be \"x,y\"")));
        };
        let mut v = vec![BigRational::from_integer(0.into()); n];
        for (name, coeff) in value {
            v[position(name)?] += coeff.to_rational()?;
        }
        brackets.push(((position(x)?, position(y)?), v));
    }
    LieAlgebra::new(doc.basis.clone(), brackets)
}

pub fn group(doc: &GroupDoc) -> Result<FiniteGroup> {
    let given = [
        doc.table.is_some(),
        doc.permutations.is_some(),
        doc.cyclic.is_some(),
        doc.symmetric.is_some(),
        doc.matrices.is_some(),
    ];
    if given.iter().filter(|&&b| b).count() != 1 {
        return Err(Error::InvalidInput(
            "a group needs exactly one of table, permutations, cyclic, symmetric, matrices".into(),
        ));
    }
    if let Some(t) = &doc.table {
        return FiniteGroup::from_table(t.clone(), doc.labels.clone());
    }
    if let Some(p) = &doc.permutations {
        return FiniteGroup::from_permutations(p);
    }
    if let Some(n) = doc.cyclic {
        if n == 0 {
            return Err(Error::InvalidGroup("cyclic group of order 0".into()));
        }
        return Ok(FiniteGroup::cyclic(n));
    }
    if let Some(n) = doc.symmetric {
        if n > 5 {
            return Err(Error::GroupTooLarge { order: (1..=n).product(), bound: 120 });
        }
        return Ok(FiniteGroup::symmetric(n));
    }
    Err(Error::InvalidInput("matrix generators define an action, not a bare group".into()))
}

fn complex_matrix(rows: &[Vec<[f64; 2]>]) -> Result<ComplexMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(Error::DimensionMismatch("ragged complex matrix".into()));
    }
    Ok(ComplexMatrix::from_fn(r, c, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
}

/// Group from `group`, action from `rho_Z` / `rho_C` keyed by element label.
pub fn toral_action(doc: &Document, max_order: usize) -> Result<ToralAction> {
    let gdoc = require(&doc.group, "group")?;
    let n = *require(&doc.n, "n")?;
    if let Some(gens) = &gdoc.matrices {
        let names: Vec<&str> = gens.keys().map(String::as_str).collect();
        let mats = gens.values().map(|m| int_matrix(m)).collect::<Result<Vec<_>>>()?;
        return ToralAction::from_generators(n, &names, mats, max_order);
    }
    let g = group(gdoc)?;
    if g.order() > max_order {
        return Err(Error::GroupTooLarge { order: g.order(), bound: max_order });
    }
    let by_label = |name: &str| -> Result<usize> {
        g.index_of(name).ok_or_else(|| Error::Parse(format!("unknown group element {name:?}")))
    };
    let rz = require(&doc.rho_z, "rho_Z")?;
    let mut rho_z: Vec<Option<IntMatrix>> = vec![None; g.order()];
    for (label, m) in rz {
        rho_z[by_label(label)?] = Some(int_matrix(m)?);
    }
    let rho_z = rho_z
        .into_iter()
        .enumerate()
        .map(|(i, m)| m.ok_or_else(|| Error::MissingData(format!("rho_Z of {}", g.label(i)))))
        .collect::<Result<Vec<_>>>()?;
    let rho_c = match &doc.rho_c {
        None => None,
        Some(rc) => {
            let mut out: Vec<Option<ComplexMatrix>> = vec![None; g.order()];
            for (label, m) in rc {
                out[by_label(label)?] = Some(complex_matrix(m)?);
            }
            Some(
                out.into_iter()
                    .enumerate()
                    .map(|(i, m)| m.ok_or_else(|| Error::MissingData(format!("rho_C of {}", g.label(i)))))
                    .collect::<Result<Vec<_>>>()?,
            )
        }
    };
    ToralAction::new(g, n, rho_z, rho_c)
}

pub fn atlas(doc: &Document) -> Result<ChartAtlas> {
    let charts = require(&doc.charts, "charts")?
        .iter()
        .map(group)
        .collect::<Result<Vec<_>>>()?;
    let mut atlas = ChartAtlas::new(charts);
    for h in doc.homs.iter().flatten() {
        let source = atlas
            .charts()
            .get(h.y)
            .ok_or_else(|| Error::OutOfRange(format!("chart {}", h.y)))?
            .clone();
        let target = atlas
            .charts()
            .get(h.x)
            .ok_or_else(|| Error::OutOfRange(format!("chart {}", h.x)))?
            .clone();
        if h.map.len() != source.order() {
            return Err(Error::DimensionMismatch(format!(
                "hom ({}, {}) has {} images for a group of order {}",
                h.x,
                h.y,
                h.map.len(),
                source.order()
            )));
        }
        let map = h.map.iter().map(|s| s.to_element(&target)).collect::<Result<Vec<_>>>()?;
        atlas.add_hom(h.x, h.y, map)?;
    }
    for t in doc.twists.iter().flatten() {
        let target = atlas
            .charts()
            .get(t.x)
            .ok_or_else(|| Error::OutOfRange(format!("chart {}", t.x)))?
            .clone();
        atlas.add_twist(t.x, t.y, t.z, t.c.to_element(&target)?)?;
    }
    Ok(atlas)
}

pub fn nerve(doc: &Document) -> Result<Nerve> {
    Nerve::from_facets(require(&doc.facets, "facets")?)
}

pub fn coefficients(doc: &Document) -> Result<AbelianCoefficients> {
    AbelianCoefficients::parse(doc.coefficients.as_deref().unwrap_or("Z"))
}

fn keyed<T: Clone>(nerve: &Nerve, map: &BTreeMap<String, T>) -> Result<(usize, BTreeMap<Vec<usize>, T>)> {
    let mut out = BTreeMap::new();
    let mut degree = None;
    for (k, v) in map {
        let t = parse_tuple(k)?;
        let d = t
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::Parse("empty simplex key".into()))?;
        if *degree.get_or_insert(d) != d {
            return Err(Error::DimensionMismatch("cochain keys of mixed degree".into()));
        }
        out.insert(t, v.clone());
    }
    let degree = degree.ok_or_else(|| Error::MissingData("empty cochain".into()))?;
    if degree > nerve.dim().unwrap_or(0) {
        return Err(Error::OutOfRange(format!("degree {degree} above the nerve dimension")));
    }
    Ok((degree, out))
}

pub fn abelian_cochain(nerve: &Nerve, coefficients: &AbelianCoefficients, map: &CochainDoc) -> Result<Cochain> {
    let (degree, keyed) = keyed(nerve, map)?;
    let values = keyed
        .into_iter()
        .map(|(k, v)| Ok((k, v.to_rational()?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Cochain::from_map(nerve, degree, coefficients.clone(), &values)
}

/// Group-valued cochains must be keyed by increasing tuples.
pub fn group_cochain(nerve: &Nerve, group: &FiniteGroup, map: &CochainDoc) -> Result<GroupCochain> {
    let (degree, keyed) = keyed(nerve, map)?;
    let mut values = vec![None; nerve.count(degree)];
    for (t, v) in keyed {
        let idx = nerve
            .index_of(&t)
            .ok_or_else(|| Error::InvalidInput(format!("{t:?} is not an increasing simplex of the nerve")))?;
        values[idx] = Some(v.to_element(group)?);
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| Error::MissingData(format!("no value on {:?}", nerve.simplices(degree)[i]))))
        .collect::<Result<Vec<_>>>()?;
    GroupCochain::new(nerve, group, degree, values)
}

pub fn extension(doc: &ExtensionDoc) -> Result<GroupExtensionData> {
    match doc {
        ExtensionDoc::Named(name) => match name.as_str() {
            "z2_z4_z2" => Ok(GroupExtensionData::z2_z4_z2()),
            "split_z2" => Ok(GroupExtensionData::split_z2()),
            "z3_s3_z2" => Ok(GroupExtensionData::z3_s3_z2()),
            other => Err(Error::Parse(format!("unknown extension {other:?}"))),
        },
        ExtensionDoc::Explicit {
            h,
            l_prime,
            l,
            inclusion,
            projection,
            section,
        } => GroupExtensionData::new(
            group(h)?,
            group(l_prime)?,
            group(l)?,
            inclusion.clone(),
            projection.clone(),
            section.clone(),
        ),
    }
}

/// Matrices keyed by simplex, one per `k`-simplex in nerve order.
pub fn matrices_on(nerve: &Nerve, k: usize, map: &BTreeMap<String, MatrixDoc>, name: &str) -> Result<Vec<RatMatrix>> {
    let mut out = vec![None; nerve.count(k)];
    for (key, m) in map {
        let t = parse_tuple(key)?;
        let idx = nerve
            .index_of(&t)
            .filter(|_| t.len() == k + 1)
            .ok_or_else(|| Error::InvalidInput(format!("{name}: {key:?} is not an increasing {k}-simplex")))?;
        out[idx] = Some(rat_matrix(m)?);
    }
    out.into_iter()
        .enumerate()
        .map(|(i, m)| m.ok_or_else(|| Error::MissingData(format!("{name}: no value on {:?}", nerve.simplices(k)[i]))))
        .collect()
}

pub fn one_form(rows: &MatrixDoc, value_dim: usize) -> Result<InvariantForm> {
    let values = rows
        .iter()
        .map(|r| r.iter().map(Scalar::to_rational).collect::<Result<RatVector>>())
        .collect::<Result<Vec<_>>>()?;
    InvariantForm::one_form(values, value_dim)
}

// Output helpers.

pub fn rat_json(q: &BigRational) -> String {
    format_rational(q)
}

pub fn vector_json(v: &[BigRational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

pub fn matrix_json(m: &RatMatrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| vector_json(r)).collect()
}

pub fn cochain_json(nerve: &Nerve, c: &Cochain) -> BTreeMap<String, String> {
    nerve
        .simplices(c.degree())
        .iter()
        .zip(c.values())
        .map(|(t, v)| (tuple_key(t), format_rational(v)))
        .collect()
}

pub fn group_cochain_json(nerve: &Nerve, group: &FiniteGroup, c: &GroupCochain) -> BTreeMap<String, String> {
    nerve
        .simplices(c.degree)
        .iter()
        .zip(&c.values)
        .map(|(t, &v)| (tuple_key(t), group.label(v).to_string()))
        .collect()
}

pub fn form_json(l: &LieAlgebra, form: &InvariantForm) -> BTreeMap<String, Vec<String>> {
    form.nonzero_components()
        .iter()
        .map(|(t, v)| {
            let names: Vec<&str> = t.iter().map(|&i| l.basis_names()[i].as_str()).collect();
            (names.join(","), vector_json(v))
        })
        .collect()
}

pub fn algebra_json(l: &LieAlgebra) -> AlgebraDoc {
    let names = l.basis_names();
    let brackets = l
        .brackets()
        .map(|(&(i, j), v)| {
            let terms = v
                .iter()
                .enumerate()
                .filter(|(_, c)| !num_traits::Zero::is_zero(*c))
                .map(|(k, c)| (names[k].clone(), Scalar::Text(format_rational(c))))
                .collect();
            (format!("{},{}", names[i], names[j]), terms)
        })
        .collect();
    AlgebraDoc {
        basis: names.to_vec(),
        brackets,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_round_trip() {
        let h = LieAlgebra::heisenberg();
        let doc = algebra_json(&h);
        let text = serde_json::to_string(&doc).unwrap();
        let back: AlgebraDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(algebra(&back).unwrap(), h);
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(parse_document(r#"{"facet": [[0,1]]}"#).is_err());
        let d = parse_document(r#"{"facets": [[0,1,2]], "cochain": {"0,1": "1/2", "1,2": 3, "0,2": "0"}}"#).unwrap();
        let n = nerve(&d).unwrap();
        let c = abelian_cochain(&n, &AbelianCoefficients::Rationals, d.cochain.as_ref().unwrap()).unwrap();
        assert_eq!(cochain_json(&n, &c)["0,1"], "1/2");
    }

    #[test]
    fn group_documents() {
        let g = group(&GroupDoc {
            cyclic: Some(4),
            ..GroupDoc::default()
        })
        .unwrap();
        assert_eq!(g.order(), 4);
        assert!(group(&GroupDoc::default()).is_err());
        assert_eq!(Scalar::Text("2".into()).to_element(&g).unwrap(), 2);
        assert!(Scalar::Int(7).to_element(&g).is_err());
    }
}
