//! JSON cover files.
//!
//! ```json
//! {
//!   "space": {"kind": "circle"},
//!   "members": [
//!     {"arcs": [["-1/16", "9/16"]]},
//!     {"arcs": [["7/16", "17/16"]]}
//!   ]
//! }
//! ```
//!
//! Tori use `{"kind": "torus", "dim": 2}` with members `{"boxes": [[["0", "3/5"], "full"]]}`;
//! finite metric spaces use `{"kind": "metric", "distances": [["0", "1"], ["1", "0"]]}` with
//! members `{"points": [0, 1]}`. Rationals are strings `"p/q"` (or integers).

use std::path::Path;

use anyhow::{bail, Context, Result};
use nervekit_core::cover::{Arc, ArcUnion, BoxUnion, Cover, OpenSet, PointSet, Side, TorusBox};
use nervekit_core::rational::{format_rational, parse_rational, Rational};
use nervekit_core::space::{FiniteMetric, Space};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SpaceFile {
    Circle,
    Torus { dim: usize },
    Metric { distances: Vec<Vec<String>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SideFile {
    Interval([String; 2]),
    Full(FullMarker),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FullMarker {
    Full,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum MemberFile {
    Arcs(Vec<[String; 2]>),
    Boxes(Vec<Vec<SideFile>>),
    Points(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverFile {
    pub space: SpaceFile,
    pub members: Vec<MemberFile>,
}

fn rational(s: &str, at: &str) -> Result<Rational> {
    parse_rational(s).with_context(|| format!("{at}: invalid rational {s:?}"))
}

fn arc(pair: &[String; 2], at: &str) -> Result<Arc> {
    Arc::between(rational(&pair[0], at)?, rational(&pair[1], at)?).with_context(|| format!("{at}: invalid arc"))
}

impl CoverFile {
    pub fn to_cover(&self) -> Result<Cover> {
        let space = match &self.space {
            SpaceFile::Circle => Space::Circle,
            SpaceFile::Torus { dim } => Space::torus(*dim)?,
            SpaceFile::Metric { distances } => {
                let m = distances
                    .iter()
                    .enumerate()
                    .map(|(i, row)| row.iter().map(|x| rational(x, &format!("space.distances[{i}]"))).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                Space::Abstract(FiniteMetric::new(m)?)
            }
        };
        let mut members = Vec::with_capacity(self.members.len());
        for (i, m) in self.members.iter().enumerate() {
            let at = format!("members[{i}]");
            members.push(match m {
                MemberFile::Arcs(arcs) => {
                    OpenSet::Arcs(ArcUnion::from_arcs(arcs.iter().map(|p| arc(p, &at)).collect::<Result<_>>()?))
                }
                MemberFile::Boxes(boxes) => {
                    let dim = boxes.first().map_or(0, Vec::len);
                    let parsed = boxes
                        .iter()
                        .map(|b| {
                            let sides = b
                                .iter()
                                .map(|s| match s {
                                    SideFile::Interval(p) => Ok(Side::Arc(arc(p, &at)?)),
                                    SideFile::Full(_) => Ok(Side::Full),
                                })
                                .collect::<Result<Vec<_>>>()?;
                            TorusBox::new(sides).with_context(|| format!("{at}: invalid box"))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    OpenSet::Boxes(BoxUnion::new(dim, parsed).with_context(|| format!("{at}: invalid box union"))?)
                }
                MemberFile::Points(p) => OpenSet::Points(PointSet::new(p.clone())),
            });
        }
        Cover::new(space, members).context("invalid cover")
    }

    pub fn from_cover(c: &Cover) -> Result<Self> {
        let space = match c.space() {
            Space::Circle => SpaceFile::Circle,
            Space::Torus { dim } => SpaceFile::Torus { dim: *dim },
            Space::Abstract(m) => {
                SpaceFile::Metric { distances: m.matrix().iter().map(|r| r.iter().map(format_rational).collect()).collect() }
            }
        };
        let pair = |a: &Arc| [format_rational(a.start()), format_rational(&a.end())];
        let members = c
            .members()
            .iter()
            .map(|m| {
                Ok(match m {
                    OpenSet::Arcs(u) if u.is_full() => MemberFile::Arcs(vec![["0".into(), "1".into()]]),
                    OpenSet::Arcs(u) => MemberFile::Arcs(u.arcs().iter().map(pair).collect()),
                    OpenSet::Boxes(b) => MemberFile::Boxes(
                        b.boxes()
                            .iter()
                            .map(|bx| {
                                bx.sides()
                                    .iter()
                                    .map(|s| match s {
                                        Side::Full => SideFile::Full(FullMarker::Full),
                                        Side::Arc(a) => SideFile::Interval(pair(a)),
                                    })
                                    .collect()
                            })
                            .collect(),
                    ),
                    OpenSet::Points(p) => MemberFile::Points(p.points().to_vec()),
                    OpenSet::Grid(_) => bail!("grid regions have no file representation"),
                })
            })
            .collect::<Result<_>>()?;
        Ok(CoverFile { space, members })
    }
}

/// Parses JSON with the failing field path and line in the error.
pub fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        anyhow::anyhow!("{what}: at field `{path}`: {}", e.into_inner())
    })
}

pub fn read_cover(path: &Path) -> Result<Cover> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let f: CoverFile = parse_json(&text, &path.display().to_string())?;
    f.to_cover().with_context(|| path.display().to_string())
}
