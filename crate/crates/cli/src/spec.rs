//! Surface spec files: flat `key=value` text naming a catalog entry and
//! overriding its parameters, domain, grid and supports.
//!
//! ```text
//! # truncated catenoid with a wider opening
//! name=truncated-catenoid
//! params.opening=2.5
//! grid=129
//! domain.kind=annular_sector
//! domain.r0=0.5
//! supports.r1=horizontal:1.5
//! supports.0=plane:0,1,0,0
//! ```
//!
//! Support values are `kind:args` with kinds `plane:n1,n2,n3,offset`,
//! `horizontal:height`, `hyperbolic:c1,c2,c3,radius` and
//! `de_sitter:c1,c2,c3,radius`. Support keys are edge indices or edge names.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use spacelike_core::capillary::{BoundaryComponent, SupportSurface};
use spacelike_core::catalog::{self, CatalogEntry};
use spacelike_core::{GeometryError, LVector3, PatchDomain};

#[derive(Debug)]
pub enum SpecError {
    Io(std::io::Error),
    Syntax { line: usize, message: String },
    UnknownSurface(String),
    Geometry(GeometryError),
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::Io(e) => write!(f, "cannot read spec: {e}"),
            SpecError::Syntax { line, message } => write!(f, "spec line {line}: {message}"),
            SpecError::UnknownSurface(name) => write!(f, "unknown surface '{name}'; see `spacelike catalog list`"),
            SpecError::Geometry(e) => write!(f, "invalid surface: {e}"),
        }
    }
}

impl std::error::Error for SpecError {}

impl From<GeometryError> for SpecError {
    fn from(e: GeometryError) -> Self {
        SpecError::Geometry(e)
    }
}

/// Parsed contents of a spec file, before the surface is built.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SurfaceSpec {
    pub name: String,
    pub params: BTreeMap<String, f64>,
    pub domain: BTreeMap<String, String>,
    pub grid: Option<usize>,
    pub supports: BTreeMap<String, String>,
}

impl SurfaceSpec {
    pub fn named(name: &str) -> Self {
        Self {
            name: name.to_owned(),
            ..Self::default()
        }
    }

    pub fn parse(text: &str) -> Result<Self, SpecError> {
        let mut spec = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let syntax = |message: String| SpecError::Syntax { line, message };
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| syntax(format!("expected key=value, found '{content}'")))?;
            let (key, value) = (key.trim(), value.trim());
            if value.is_empty() {
                return Err(syntax(format!("empty value for '{key}'")));
            }
            if key == "name" {
                spec.name = value.to_owned();
            } else if key == "grid" {
                spec.grid = Some(value.parse().map_err(|_| syntax(format!("grid must be a positive integer, found '{value}'")))?);
            } else if let Some(p) = key.strip_prefix("params.") {
                let x = parse_number(value).ok_or_else(|| syntax(format!("params.{p} must be a number, found '{value}'")))?;
                spec.params.insert(p.to_owned(), x);
            } else if let Some(d) = key.strip_prefix("domain.") {
                spec.domain.insert(d.to_owned(), value.to_owned());
            } else if let Some(s) = key.strip_prefix("supports.") {
                spec.supports.insert(s.to_owned(), value.to_owned());
            } else {
                return Err(syntax(format!("unknown key '{key}'")));
            }
        }
        if spec.name.is_empty() {
            return Err(SpecError::Syntax {
                line: 0,
                message: "missing name=".into(),
            });
        }
        Ok(spec)
    }

    /// A path to an existing file is parsed; anything else is a catalog name.
    pub fn load(arg: &str) -> Result<Self, SpecError> {
        let path = Path::new(arg);
        if path.is_file() {
            let text = std::fs::read_to_string(path).map_err(SpecError::Io)?;
            Self::parse(&text)
        } else {
            Ok(Self::named(arg))
        }
    }

    /// Build the catalog entry and apply the overrides.
    pub fn build(&self) -> Result<CatalogEntry, SpecError> {
        if !catalog::NAMES.contains(&self.name.as_str()) {
            return Err(SpecError::UnknownSurface(self.name.clone()));
        }
        let mut entry = catalog::build(&self.name, &|k| self.params.get(k).copied())?;
        if !self.domain.is_empty() {
            let domain = self.domain_override(entry.patch.domain())?;
            entry.patch = entry.patch.with_domain(domain)?;
        }
        let names = entry.patch.domain().edge_names();
        for (key, value) in &self.supports {
            let edge = match key.parse::<usize>() {
                Ok(i) if i < names.len() => i,
                Ok(_) => return Err(syntax0(format!("edge {key} out of range"))),
                Err(_) => names
                    .iter()
                    .position(|n| n == key)
                    .ok_or_else(|| syntax0(format!("unknown edge '{key}', expected one of {names:?}")))?,
            };
            let support = parse_support(value)?;
            entry.supports.retain(|c| c.edge != edge);
            entry.supports.push(BoundaryComponent { edge, support });
            entry.expected.retain(|e| e.edge != Some(edge));
        }
        entry.supports.sort_by_key(|c| c.edge);
        Ok(entry)
    }

    fn domain_override(&self, base: &PatchDomain) -> Result<PatchDomain, SpecError> {
        let base_kind = match base {
            PatchDomain::Rectangle { .. } => "rectangle",
            PatchDomain::HalfDisk { .. } => "half_disk",
            PatchDomain::Disk { .. } => "disk",
            PatchDomain::AnnularSector { .. } => "annular_sector",
        };
        let kind = self.domain.get("kind").map(String::as_str).unwrap_or(base_kind);
        let num = |key: &str, default: Option<f64>| -> Result<f64, SpecError> {
            match self.domain.get(key) {
                Some(v) => parse_number(v).ok_or_else(|| syntax0(format!("domain.{key} must be a number"))),
                None => default.ok_or_else(|| syntax0(format!("domain.{key} is required for {kind}"))),
            }
        };
        for key in self.domain.keys() {
            let allowed: &[&str] = match kind {
                "rectangle" => &["kind", "u0", "u1", "v0", "v1"],
                "disk" | "half_disk" => &["kind", "radius"],
                "annular_sector" => &["kind", "r0", "r1", "theta0", "theta1"],
                _ => return Err(syntax0(format!("unknown domain kind '{kind}'"))),
            };
            if !allowed.contains(&key.as_str()) {
                return Err(syntax0(format!("domain.{key} does not apply to {kind}")));
            }
        }
        let same = kind == base_kind;
        Ok(match (kind, *base) {
            ("rectangle", b) => {
                let (u0, u1, v0, v1) = b.bounding_box();
                let d = |x| same.then_some(x);
                PatchDomain::rectangle(num("u0", d(u0))?, num("u1", d(u1))?, num("v0", d(v0))?, num("v1", d(v1))?)?
            }
            ("disk", PatchDomain::Disk { radius }) => PatchDomain::disk(num("radius", Some(radius))?)?,
            ("disk", _) => PatchDomain::disk(num("radius", None)?)?,
            ("half_disk", PatchDomain::HalfDisk { radius }) => PatchDomain::half_disk(num("radius", Some(radius))?)?,
            ("half_disk", _) => PatchDomain::half_disk(num("radius", None)?)?,
            (
                "annular_sector",
                PatchDomain::AnnularSector {
                    r0,
                    r1,
                    theta0,
                    theta1,
                },
            ) => PatchDomain::annular_sector(num("r0", Some(r0))?, num("r1", Some(r1))?, num("theta0", Some(theta0))?, num("theta1", Some(theta1))?)?,
            ("annular_sector", _) => PatchDomain::annular_sector(num("r0", None)?, num("r1", None)?, num("theta0", None)?, num("theta1", None)?)?,
            (other, _) => return Err(syntax0(format!("unknown domain kind '{other}'"))),
        })
    }
}

fn syntax0(message: String) -> SpecError {
    SpecError::Syntax { line: 0, message }
}

fn parse_number(s: &str) -> Option<f64> {
    let s = s.trim();
    let x = match s {
        "pi" => std::f64::consts::PI,
        "-pi" => -std::f64::consts::PI,
        _ => s.parse().ok()?,
    };
    x.is_finite().then_some(x)
}

/// Parse `kind:args` into a support surface.
pub fn parse_support(value: &str) -> Result<SupportSurface, SpecError> {
    let (kind, args) = value.split_once(':').unwrap_or((value, ""));
    let nums: Vec<f64> = args
        .split(',')
        .filter(|a| !a.trim().is_empty())
        .map(|a| parse_number(a).ok_or_else(|| syntax0(format!("bad number '{a}' in support '{value}'"))))
        .collect::<Result<_, _>>()?;
    let arity = |n: usize| -> Result<(), SpecError> {
        if nums.len() == n {
            Ok(())
        } else {
            Err(syntax0(format!("support '{kind}' takes {n} numbers, found {}", nums.len())))
        }
    };
    Ok(match kind.trim() {
        "plane" => {
            arity(4)?;
            SupportSurface::plane(LVector3::new(nums[0], nums[1], nums[2]), nums[3])?
        }
        "horizontal" => {
            arity(1)?;
            SupportSurface::horizontal(nums[0])?
        }
        "hyperbolic" => {
            arity(4)?;
            SupportSurface::hyperbolic(LVector3::new(nums[0], nums[1], nums[2]), nums[3])?
        }
        "de_sitter" => {
            arity(4)?;
            SupportSurface::de_sitter(LVector3::new(nums[0], nums[1], nums[2]), nums[3])?
        }
        other => return Err(syntax0(format!("unknown support kind '{other}'"))),
    })
}
