//! JSON surface description: gluing graph, Fenchel–Nielsen values and
//! numeric options.
//!
//! ```json
//! {
//!   "genus": 2,
//!   "pants": [{"id": "P"}, {"id": "Q"}],
//!   "gluings": [{"curve": "c1", "ends": [[0, 0], [1, 0]]}, ...],
//!   "fn": {"c1": {"l": [2.0, 0.0], "tau": [0.3, 0.0]}, ...},
//!   "options": {"fd_step": 1e-4, "tol": 1e-4, "word_length": 6}
//! }
//! ```
//!
//! Every validation failure names the offending field by JSON pointer.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::surface::{CuffRef, FnCoordinates, Gluing, PantsGraph};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Options {
    pub fd_step: f64,
    pub tol: f64,
    pub word_length: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            fd_step: 1e-4,
            tol: 1e-4,
            word_length: 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SurfaceConfig {
    pub genus: usize,
    pub pants: Vec<String>,
    pub gluings: Vec<Gluing>,
    /// Values in gluing order.
    pub fn_: FnCoordinates,
    pub options: Options,
}

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        message: message.into(),
    }
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| schema(path, format!("missing field `{key}`")))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| schema(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn as_index(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| schema(path, "expected a non-negative integer"))
}

fn as_number(v: &Value, path: &str) -> Result<f64> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| schema(path, "expected a finite number"))
}

fn as_complex(v: &Value, path: &str) -> Result<C64> {
    let a = as_array(v, path)?;
    if a.len() != 2 {
        return Err(schema(path, format!("expected [re, im], found {} entries", a.len())));
    }
    Ok(C64::new(
        as_number(&a[0], &format!("{path}/0"))?,
        as_number(&a[1], &format!("{path}/1"))?,
    ))
}

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

pub fn parse_config(text: &str) -> Result<SurfaceConfig> {
    let root: Value = serde_json::from_str(text).map_err(|e| {
        schema(
            "",
            format!("invalid JSON at line {}, column {}: {e}", e.line(), e.column()),
        )
    })?;
    let root = as_object(&root, "")?;

    let genus = as_index(field(root, "", "genus")?, "/genus")?;
    if genus < 2 {
        return Err(schema("/genus", format!("genus must be at least 2, found {genus}")));
    }

    let pants_v = as_array(field(root, "", "pants")?, "/pants")?;
    let mut pants = Vec::with_capacity(pants_v.len());
    for (i, p) in pants_v.iter().enumerate() {
        let path = format!("/pants/{i}");
        let obj = as_object(p, &path)?;
        let id = field(obj, &path, "id")?
            .as_str()
            .ok_or_else(|| schema(format!("{path}/id"), "expected a string"))?;
        if pants.iter().any(|q: &String| q == id) {
            return Err(schema(format!("{path}/id"), format!("duplicate pants id `{id}`")));
        }
        pants.push(id.to_string());
    }
    if pants.len() != 2 * genus - 2 {
        return Err(Error::CountMismatch {
            what: "pants (2g - 2)".into(),
            expected: 2 * genus - 2,
            found: pants.len(),
        });
    }

    let gluings_v = as_array(field(root, "", "gluings")?, "/gluings")?;
    if gluings_v.len() != 3 * genus - 3 {
        return Err(Error::CountMismatch {
            what: "gluings (3g - 3)".into(),
            expected: 3 * genus - 3,
            found: gluings_v.len(),
        });
    }
    let mut used: Vec<Option<String>> = vec![None; 3 * pants.len()];
    let mut gluings = Vec::with_capacity(gluings_v.len());
    for (i, g) in gluings_v.iter().enumerate() {
        let path = format!("/gluings/{i}");
        let obj = as_object(g, &path)?;
        let curve = field(obj, &path, "curve")?
            .as_str()
            .ok_or_else(|| schema(format!("{path}/curve"), "expected a string"))?
            .to_string();
        if gluings.iter().any(|x: &Gluing| x.curve == curve) {
            return Err(schema(format!("{path}/curve"), format!("duplicate curve label `{curve}`")));
        }
        let ends_v = as_array(field(obj, &path, "ends")?, &format!("{path}/ends"))?;
        if ends_v.len() != 2 {
            return Err(schema(format!("{path}/ends"), "expected exactly two ends"));
        }
        let mut ends = [CuffRef::new(0, 0); 2];
        for (k, e) in ends_v.iter().enumerate() {
            let epath = format!("{path}/ends/{k}");
            let pair = as_array(e, &epath)?;
            if pair.len() != 2 {
                return Err(schema(&epath, "expected [pantsIndex, cuffIndex]"));
            }
            let p = as_index(&pair[0], &format!("{epath}/0"))?;
            let c = as_index(&pair[1], &format!("{epath}/1"))?;
            if p >= pants.len() {
                return Err(Error::DanglingCuff {
                    path: format!("{epath}/0"),
                    message: format!("pants index {p} out of range (0..{})", pants.len()),
                });
            }
            if c >= 3 {
                return Err(Error::DanglingCuff {
                    path: format!("{epath}/1"),
                    message: format!("cuff index {c} out of range (0..3)"),
                });
            }
            let slot = &mut used[3 * p + c];
            if let Some(prev) = slot {
                return Err(Error::DanglingCuff {
                    path: epath,
                    message: format!("cuff {c} of pants `{}` is already glued along `{prev}`", pants[p]),
                });
            }
            *slot = Some(curve.clone());
            ends[k] = CuffRef::new(p, c);
        }
        gluings.push(Gluing { curve, ends });
    }
    if let Some(free) = used.iter().position(Option::is_none) {
        return Err(Error::DanglingCuff {
            path: "/gluings".into(),
            message: format!("cuff {} of pants `{}` is not glued", free % 3, pants[free / 3]),
        });
    }

    let fn_obj = as_object(field(root, "", "fn")?, "/fn")?;
    for key in fn_obj.keys() {
        if !gluings.iter().any(|g| &g.curve == key) {
            return Err(schema(format!("/fn/{}", escape(key)), "no gluing with this curve label"));
        }
    }
    let mut l = Vec::with_capacity(gluings.len());
    let mut tau = Vec::with_capacity(gluings.len());
    for g in &gluings {
        let path = format!("/fn/{}", escape(&g.curve));
        let entry = fn_obj
            .get(&g.curve)
            .ok_or_else(|| schema(&path, "missing Fenchel-Nielsen values for this curve"))?;
        let obj = as_object(entry, &path)?;
        let lv = as_complex(field(obj, &path, "l")?, &format!("{path}/l"))?;
        if !(lv.re > 0.0) {
            return Err(schema(format!("{path}/l/0"), "length must have positive real part"));
        }
        l.push(lv);
        tau.push(as_complex(field(obj, &path, "tau")?, &format!("{path}/tau"))?);
    }
    let fn_ = FnCoordinates::new(l, tau)?;

    let mut options = Options::default();
    if let Some(o) = root.get("options") {
        let obj = as_object(o, "/options")?;
        if let Some(v) = obj.get("fd_step") {
            options.fd_step = as_number(v, "/options/fd_step")?;
            if options.fd_step <= 0.0 {
                return Err(schema("/options/fd_step", "must be positive"));
            }
        }
        if let Some(v) = obj.get("tol") {
            options.tol = as_number(v, "/options/tol")?;
        }
        if let Some(v) = obj.get("word_length") {
            options.word_length = as_index(v, "/options/word_length")?;
            if options.word_length == 0 {
                return Err(schema("/options/word_length", "must be at least 1"));
            }
        }
    }

    let config = SurfaceConfig {
        genus,
        pants,
        gluings,
        fn_,
        options,
    };
    config.graph()?;
    Ok(config)
}

impl SurfaceConfig {
    pub fn graph(&self) -> Result<PantsGraph> {
        PantsGraph::new(self.genus, self.pants.clone(), self.gluings.clone())
    }

    pub fn to_json(&self) -> Value {
        let fn_: Map<String, Value> = self
            .gluings
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let (l, t) = (self.fn_.l[i], self.fn_.tau[i]);
                (g.curve.clone(), json!({"l": [l.re, l.im], "tau": [t.re, t.im]}))
            })
            .collect();
        json!({
            "genus": self.genus,
            "pants": self.pants.iter().map(|id| json!({"id": id})).collect::<Vec<_>>(),
            "gluings": self.gluings.iter().map(|g| json!({
                "curve": g.curve,
                "ends": g.ends.iter().map(|e| [e.pants, e.cuff]).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "fn": fn_,
            "options": self.options,
        })
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("config serializes")
    }
}

/// The bundled genus-2 example: the theta graph at a Fuchsian point.
pub const GENUS2_EXAMPLE: &str = include_str!("../data/genus2.json");
