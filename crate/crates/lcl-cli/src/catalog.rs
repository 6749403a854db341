//! Group catalog: named desk-scale example groups, a JSON spec format with
//! canonical round-tripping, and the builder turning a spec into exact
//! generator matrices with their star context.

use lcl_core::exactnum::{
    field_create, rational_field, ExactError, FieldElement, NumberField, Scalar, TElem,
};
use lcl_core::moebius::Mat2;
use lcl_core::poly::Poly;
use lcl_core::quaternion::{QuatError, Quaternion, QuaternionAlgebra};
use lcl_core::stargroup::StarContext;
use rug::Rational;
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("unsupported catalog parameter: {0}")]
    UnsupportedParameter(String),
    #[error("bad group spec: {0}")]
    BadSpec(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Quat(#[from] QuatError),
}

/// Coefficient vector of a field element, low degree first.
pub type CoeffVec = Vec<Rational>;

/// One 2x2 generator as coefficient vectors.
pub type MatSpec = [[CoeffVec; 2]; 2];

/// Generators come either as plain matrices over the field or as norm-one
/// quaternions embedded through the algebra.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    Matrices(Vec<MatSpec>),
    Quaternion {
        a: CoeffVec,
        b: CoeffVec,
        units: Vec<[CoeffVec; 4]>,
    },
}

/// A fully specified group: field, generators, and factor selection.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupSpec {
    pub label: String,
    /// Minimal polynomial of the field generator, low degree first;
    /// degree 1 means the rationals.
    pub min_poly: Vec<Rational>,
    pub names: Vec<String>,
    pub generators: GeneratorSpec,
    /// Indices into the field's (or tower's) place list, repeats allowed;
    /// None selects every place once.
    pub places: Option<Vec<usize>>,
}

/// A spec instantiated into exact matrices. Field groups evaluate over
/// number-field places, quaternion groups over the places of the tower
/// that splits the algebra.
pub enum BuiltGroup {
    Field {
        field: Arc<NumberField>,
        gens: Vec<Mat2<FieldElement>>,
        ctx: StarContext<FieldElement>,
        names: Vec<String>,
    },
    Tower {
        algebra: QuaternionAlgebra,
        gens: Vec<Mat2<TElem>>,
        ctx: StarContext<TElem>,
        names: Vec<String>,
    },
}

impl BuiltGroup {
    pub fn names(&self) -> Vec<&str> {
        match self {
            BuiltGroup::Field { names, .. } => names.iter().map(|s| s.as_str()).collect(),
            BuiltGroup::Tower { names, .. } => names.iter().map(|s| s.as_str()).collect(),
        }
    }

    pub fn factor_count(&self) -> usize {
        match self {
            BuiltGroup::Field { ctx, .. } => ctx.len(),
            BuiltGroup::Tower { ctx, .. } => ctx.len(),
        }
    }
}

fn rat(n: i64) -> Rational {
    Rational::from(n)
}

fn coeffs_i64(v: &[i64]) -> CoeffVec {
    v.iter().map(|&n| rat(n)).collect()
}

/// Builds the named catalog group. Supported names: hecke (m in
/// {3,4,5,6,7,8,10,12}), psl2z-diag (factor count), hilbert-sample
/// (squarefree d > 1), quat-remark (no parameter). Custom groups are read
/// from JSON spec files instead.
pub fn catalog(name: &str, params: &str) -> Result<GroupSpec, CatalogError> {
    match name {
        "hecke" => {
            let m: u32 = params
                .parse()
                .map_err(|_| CatalogError::UnsupportedParameter(format!("hecke:{}", params)))?;
            hecke_spec(m)
        }
        "psl2z-diag" => {
            let n: usize = params
                .parse()
                .map_err(|_| CatalogError::UnsupportedParameter(format!("psl2z-diag:{}", params)))?;
            if n == 0 || n > 8 {
                return Err(CatalogError::UnsupportedParameter(format!(
                    "psl2z-diag:{} (want 1..=8 factors)",
                    n
                )));
            }
            Ok(GroupSpec {
                label: format!("psl2z-diag-{}", n),
                min_poly: coeffs_i64(&[0, 1]),
                names: vec!["S".into(), "T".into()],
                generators: GeneratorSpec::Matrices(vec![
                    mat_i64([[0, 1], [-1, 0]]),
                    mat_i64([[1, 1], [0, 1]]),
                ]),
                places: Some(vec![0; n]),
            })
        }
        "hilbert-sample" => {
            let d: i64 = params.parse().map_err(|_| {
                CatalogError::UnsupportedParameter(format!("hilbert-sample:{}", params))
            })?;
            if d < 2 || !is_squarefree(d) {
                return Err(CatalogError::UnsupportedParameter(format!(
                    "hilbert-sample:{} (want squarefree d > 1)",
                    d
                )));
            }
            // omega spans the ring of integers: (1 + sqrt d)/2 for d = 1
            // mod 4, sqrt d otherwise
            let omega: CoeffVec = if d % 4 == 1 {
                vec![Rational::from((1, 2)), Rational::from((1, 2))]
            } else {
                coeffs_i64(&[0, 1])
            };
            let mut u = mat_i64([[1, 0], [0, 1]]);
            u[0][1] = omega;
            Ok(GroupSpec {
                label: format!("hilbert-{}", d),
                min_poly: vec![rat(-d), rat(0), rat(1)],
                names: vec!["S".into(), "T".into(), "U".into()],
                generators: GeneratorSpec::Matrices(vec![
                    mat_i64([[0, 1], [-1, 0]]),
                    mat_i64([[1, 1], [0, 1]]),
                    u,
                ]),
                places: None,
            })
        }
        "quat-remark" => {
            if !params.is_empty() {
                return Err(CatalogError::UnsupportedParameter(format!(
                    "quat-remark:{} (takes no parameter)",
                    params
                )));
            }
            let el = |a: i64, b: i64| normalize_coeffs(&[rat(a), rat(b)]);
            Ok(GroupSpec {
                label: "quat-remark".into(),
                min_poly: coeffs_i64(&[-2, 0, 1]),
                names: vec!["j".into(), "x".into(), "y".into()],
                generators: GeneratorSpec::Quaternion {
                    a: coeffs_i64(&[0, 1]),
                    b: coeffs_i64(&[-1]),
                    units: vec![
                        [el(0, 0), el(0, 0), el(1, 0), el(0, 0)],
                        [el(1, 1), el(1, 1), el(2, 1), el(1, 1)],
                        [el(2, 1), el(1, 1), el(1, 1), el(1, 1)],
                    ],
                },
                places: None,
            })
        }
        "custom" => Err(CatalogError::UnsupportedParameter(
            "custom groups are supplied via --spec FILE".into(),
        )),
        other => Err(CatalogError::UnsupportedParameter(other.into())),
    }
}

/// Hardcoded minimal polynomials of 2cos(pi/m); each is verified against
/// the Chebyshev recurrence in the tests.
fn hecke_spec(m: u32) -> Result<GroupSpec, CatalogError> {
    let mp: Vec<i64> = match m {
        3 => vec![0, 1], // 2cos(pi/3) = 1, rational
        4 => vec![-2, 0, 1],
        5 => vec![-1, -1, 1],
        6 => vec![-3, 0, 1],
        7 => vec![1, -2, -1, 1],
        8 => vec![2, 0, -4, 0, 1],
        10 => vec![5, 0, -5, 0, 1],
        12 => vec![1, 0, -4, 0, 1],
        _ => {
            return Err(CatalogError::UnsupportedParameter(format!(
                "hecke:{} (supported m: 3,4,5,6,7,8,10,12)",
                m
            )))
        }
    };
    let lambda: CoeffVec = if m == 3 {
        coeffs_i64(&[1])
    } else {
        coeffs_i64(&[0, 1])
    };
    let mut t = mat_i64([[1, 0], [0, 1]]);
    t[0][1] = lambda;
    Ok(GroupSpec {
        label: format!("hecke-{}", m),
        min_poly: coeffs_i64(&mp),
        names: vec!["S".into(), "T".into()],
        generators: GeneratorSpec::Matrices(vec![mat_i64([[0, 1], [-1, 0]]), t]),
        places: None,
    })
}

fn mat_i64(e: [[i64; 2]; 2]) -> MatSpec {
    [
        [coeffs_i64(&[e[0][0]]), coeffs_i64(&[e[0][1]])],
        [coeffs_i64(&[e[1][0]]), coeffs_i64(&[e[1][1]])],
    ]
}

fn is_squarefree(mut d: i64) -> bool {
    let mut p = 2i64;
    while p * p <= d {
        if d % (p * p) == 0 {
            return false;
        }
        while d % p == 0 {
            d /= p;
        }
        p += 1;
    }
    true
}

/// Instantiates a spec at the given working precision (decimal digits).
pub fn build(spec: &GroupSpec, digits: u32) -> Result<BuiltGroup, CatalogError> {
    let mp = normalize_coeffs(&spec.min_poly);
    if mp.len() < 2 {
        return Err(CatalogError::BadSpec(
            "field minimal polynomial must have degree >= 1".into(),
        ));
    }
    let field = if mp.len() == 2 {
        rational_field()
    } else {
        field_create(Poly::new(mp), digits, false)?
    };
    match &spec.generators {
        GeneratorSpec::Matrices(mats) => {
            let mut gens = Vec::with_capacity(mats.len());
            for m in mats {
                gens.push(build_matrix(&field, m)?);
            }
            if gens.is_empty() {
                return Err(CatalogError::BadSpec("no generators".into()));
            }
            let ctx = select_places::<FieldElement>(&field.places, &spec.places)?;
            Ok(BuiltGroup::Field {
                field,
                gens,
                ctx,
                names: spec.names.clone(),
            })
        }
        GeneratorSpec::Quaternion { a, b, units } => {
            let a = element(&field, a)?;
            let b = element(&field, b)?;
            let algebra = QuaternionAlgebra::new(field.clone(), a, b)?;
            let mut gens = Vec::with_capacity(units.len());
            for u in units {
                let q = Quaternion::from_coords([
                    element(&field, &u[0])?,
                    element(&field, &u[1])?,
                    element(&field, &u[2])?,
                    element(&field, &u[3])?,
                ]);
                if !algebra.unit_check(&q)? {
                    return Err(CatalogError::BadSpec(
                        "quaternion generator is not an integral norm-one unit".into(),
                    ));
                }
                gens.push(algebra.embed_unimodular(&q)?);
            }
            if gens.is_empty() {
                return Err(CatalogError::BadSpec("no generators".into()));
            }
            let ctx = select_places::<TElem>(&algebra.tower.places, &spec.places)?;
            Ok(BuiltGroup::Tower {
                algebra,
                gens,
                ctx,
                names: spec.names.clone(),
            })
        }
    }
}

fn select_places<S: Scalar>(
    all: &[S::Pl],
    chosen: &Option<Vec<usize>>,
) -> Result<StarContext<S>, CatalogError> {
    let places: Vec<S::Pl> = match chosen {
        None => all.to_vec(),
        Some(idx) => {
            let mut v = Vec::with_capacity(idx.len());
            for &i in idx {
                if i >= all.len() {
                    return Err(CatalogError::BadSpec(format!(
                        "place index {} out of range ({} places)",
                        i,
                        all.len()
                    )));
                }
                v.push(all[i].clone());
            }
            v
        }
    };
    if places.is_empty() {
        return Err(CatalogError::BadSpec("empty place selection".into()));
    }
    Ok(StarContext::new(places))
}

fn element(field: &Arc<NumberField>, coeffs: &[Rational]) -> Result<FieldElement, CatalogError> {
    if coeffs.len() > field.degree {
        return Err(CatalogError::BadSpec(format!(
            "coefficient vector of length {} in a degree-{} field",
            coeffs.len(),
            field.degree
        )));
    }
    Ok(field.element(coeffs.to_vec()))
}

fn build_matrix(field: &Arc<NumberField>, m: &MatSpec) -> Result<Mat2<FieldElement>, CatalogError> {
    Mat2::new(
        element(field, &m[0][0])?,
        element(field, &m[0][1])?,
        element(field, &m[1][0])?,
        element(field, &m[1][1])?,
    )
    .map_err(CatalogError::BadSpec)
}

/// Strips trailing zero coefficients (canonical form keeps at least one).
fn normalize_coeffs(v: &[Rational]) -> Vec<Rational> {
    let mut out = v.to_vec();
    while out.len() > 1 && out.last().map_or(false, |q| *q == 0) {
        out.pop();
    }
    out
}

// ---------------------------------------------------------------------------
// JSON round-tripping. The canonical form renders rationals as "n" or
// "n/d" strings and trims trailing zero coefficients, so
// serialize(parse(j)) normalizes j.

fn coeffs_to_json(v: &[Rational]) -> serde_json::Value {
    serde_json::Value::Array(
        normalize_coeffs(v)
            .iter()
            .map(|q| serde_json::Value::String(q.to_string()))
            .collect(),
    )
}

fn coeffs_from_json(v: &serde_json::Value, what: &str) -> Result<CoeffVec, CatalogError> {
    let arr = v
        .as_array()
        .ok_or_else(|| CatalogError::BadSpec(format!("{}: expected an array", what)))?;
    let mut out = Vec::with_capacity(arr.len());
    for e in arr {
        let s = e
            .as_str()
            .ok_or_else(|| CatalogError::BadSpec(format!("{}: expected \"n\" or \"n/d\"", what)))?;
        let q = Rational::from_str(s)
            .map_err(|_| CatalogError::BadSpec(format!("{}: bad rational {:?}", what, s)))?;
        out.push(q);
    }
    if out.is_empty() {
        return Err(CatalogError::BadSpec(format!("{}: empty", what)));
    }
    Ok(normalize_coeffs(&out))
}

impl GroupSpec {
    pub fn to_json_value(&self) -> serde_json::Value {
        let mut root = serde_json::Map::new();
        root.insert("label".into(), serde_json::Value::String(self.label.clone()));
        root.insert(
            "field".into(),
            serde_json::json!({ "min_poly": coeffs_to_json(&self.min_poly) }),
        );
        root.insert(
            "names".into(),
            serde_json::Value::Array(
                self.names
                    .iter()
                    .map(|n| serde_json::Value::String(n.clone()))
                    .collect(),
            ),
        );
        match &self.generators {
            GeneratorSpec::Matrices(mats) => {
                let ms: Vec<serde_json::Value> = mats
                    .iter()
                    .map(|m| {
                        serde_json::json!([
                            [coeffs_to_json(&m[0][0]), coeffs_to_json(&m[0][1])],
                            [coeffs_to_json(&m[1][0]), coeffs_to_json(&m[1][1])],
                        ])
                    })
                    .collect();
                root.insert("generators".into(), serde_json::Value::Array(ms));
            }
            GeneratorSpec::Quaternion { a, b, units } => {
                let us: Vec<serde_json::Value> = units
                    .iter()
                    .map(|u| {
                        serde_json::Value::Array(u.iter().map(|c| coeffs_to_json(c)).collect())
                    })
                    .collect();
                root.insert(
                    "quaternion".into(),
                    serde_json::json!({
                        "a": coeffs_to_json(a),
                        "b": coeffs_to_json(b),
                        "units": us,
                    }),
                );
            }
        }
        if let Some(places) = &self.places {
            root.insert(
                "places".into(),
                serde_json::Value::Array(
                    places.iter().map(|&i| serde_json::json!(i)).collect(),
                ),
            );
        }
        serde_json::Value::Object(root)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_value()).expect("serializable")
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<GroupSpec, CatalogError> {
        let obj = v
            .as_object()
            .ok_or_else(|| CatalogError::BadSpec("expected a JSON object".into()))?;
        let label = obj
            .get("label")
            .and_then(|l| l.as_str())
            .ok_or_else(|| CatalogError::BadSpec("missing label".into()))?
            .to_string();
        let min_poly = coeffs_from_json(
            obj.get("field")
                .and_then(|f| f.get("min_poly"))
                .ok_or_else(|| CatalogError::BadSpec("missing field.min_poly".into()))?,
            "field.min_poly",
        )?;
        let names = obj
            .get("names")
            .and_then(|n| n.as_array())
            .ok_or_else(|| CatalogError::BadSpec("missing names".into()))?
            .iter()
            .map(|n| {
                n.as_str()
                    .map(String::from)
                    .ok_or_else(|| CatalogError::BadSpec("names: expected strings".into()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let generators = match (obj.get("generators"), obj.get("quaternion")) {
            (Some(gs), None) => {
                let arr = gs
                    .as_array()
                    .ok_or_else(|| CatalogError::BadSpec("generators: expected array".into()))?;
                let mut mats = Vec::with_capacity(arr.len());
                for g in arr {
                    let rows = g.as_array().filter(|r| r.len() == 2).ok_or_else(|| {
                        CatalogError::BadSpec("generator: expected two rows".into())
                    })?;
                    let mut m: MatSpec = Default::default();
                    for (i, row) in rows.iter().enumerate() {
                        let cols = row.as_array().filter(|c| c.len() == 2).ok_or_else(|| {
                            CatalogError::BadSpec("generator row: expected two entries".into())
                        })?;
                        for (j, e) in cols.iter().enumerate() {
                            m[i][j] = coeffs_from_json(e, "generator entry")?;
                        }
                    }
                    mats.push(m);
                }
                GeneratorSpec::Matrices(mats)
            }
            (None, Some(q)) => {
                let a = coeffs_from_json(
                    q.get("a")
                        .ok_or_else(|| CatalogError::BadSpec("quaternion.a missing".into()))?,
                    "quaternion.a",
                )?;
                let b = coeffs_from_json(
                    q.get("b")
                        .ok_or_else(|| CatalogError::BadSpec("quaternion.b missing".into()))?,
                    "quaternion.b",
                )?;
                let us = q
                    .get("units")
                    .and_then(|u| u.as_array())
                    .ok_or_else(|| CatalogError::BadSpec("quaternion.units missing".into()))?;
                let mut units = Vec::with_capacity(us.len());
                for u in us {
                    let cs = u.as_array().filter(|c| c.len() == 4).ok_or_else(|| {
                        CatalogError::BadSpec("quaternion unit: expected four coefficients".into())
                    })?;
                    let mut unit: [CoeffVec; 4] = Default::default();
                    for (i, c) in cs.iter().enumerate() {
                        unit[i] = coeffs_from_json(c, "quaternion unit coefficient")?;
                    }
                    units.push(unit);
                }
                GeneratorSpec::Quaternion { a, b, units }
            }
            (Some(_), Some(_)) => {
                return Err(CatalogError::BadSpec(
                    "give either generators or quaternion, not both".into(),
                ))
            }
            (None, None) => {
                return Err(CatalogError::BadSpec(
                    "missing generators (or quaternion)".into(),
                ))
            }
        };
        let places = match obj.get("places") {
            None => None,
            Some(p) => Some(
                p.as_array()
                    .ok_or_else(|| CatalogError::BadSpec("places: expected array".into()))?
                    .iter()
                    .map(|i| {
                        i.as_u64()
                            .map(|n| n as usize)
                            .ok_or_else(|| CatalogError::BadSpec("places: expected indices".into()))
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        Ok(GroupSpec {
            label,
            min_poly,
            names,
            generators,
            places,
        })
    }

    pub fn from_json(s: &str) -> Result<GroupSpec, CatalogError> {
        let v: serde_json::Value = serde_json::from_str(s)
            .map_err(|e| CatalogError::BadSpec(format!("invalid JSON: {}", e)))?;
        GroupSpec::from_json_value(&v)
    }
}

/// Parses a --group argument of the form name or name:params.
pub fn parse_group_arg(arg: &str) -> (String, String) {
    match arg.split_once(':') {
        Some((n, p)) => (n.to_string(), p.to_string()),
        None => (arg.to_string(), String::new()),
    }
}
