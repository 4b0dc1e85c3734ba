use serde::{Deserialize, Serialize};

use super::text::{parse_label_at, RawDiagram};
use super::{Diagram, Leg, Skeleton};
use crate::error::{Error, Result};

/// JSON mirror of the text format. Labels use the text syntax.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct DiagramJson {
    #[serde(default)]
    pub skeleton: Option<SkeletonJson>,
    #[serde(default)]
    pub tri: Vec<[String; 3]>,
    #[serde(default)]
    pub uni: Vec<LegJson>,
    #[serde(default)]
    pub edges: Vec<EdgeJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SkeletonJson {
    #[serde(default)]
    pub lines: Vec<String>,
    #[serde(default)]
    pub circles: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct LegJson {
    pub half_edge: String,
    pub mark: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pos: Option<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct EdgeJson {
    pub from: String,
    pub to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl DiagramJson {
    pub fn from_diagram(d: &Diagram) -> Self {
        let raw = RawDiagram::from_diagram(d);
        let s = d.skeleton();
        DiagramJson {
            skeleton: (!s.is_marks()).then(|| SkeletonJson { lines: s.lines.clone(), circles: s.circles.clone() }),
            tri: raw.tri,
            uni: raw
                .uni
                .into_iter()
                .map(|(n, l)| LegJson { half_edge: n, mark: l.label, pos: l.pos })
                .collect(),
            edges: raw
                .edges
                .into_iter()
                .map(|(a, b, l)| EdgeJson { from: a, to: b, label: l.map(|l| l.to_string()) })
                .collect(),
        }
    }

    pub fn to_diagram(&self) -> Result<Diagram> {
        let mut raw = RawDiagram {
            skeleton: self.skeleton.as_ref().map(|s| Skeleton { lines: s.lines.clone(), circles: s.circles.clone() }),
            tri: self.tri.clone(),
            ..Default::default()
        };
        for l in &self.uni {
            raw.uni.push((l.half_edge.clone(), Leg { label: l.mark.clone(), pos: l.pos }));
        }
        for e in &self.edges {
            let label = e.label.as_deref().map(|s| parse_label_at(s, 1, 1)).transpose()?;
            raw.edges.push((e.from.clone(), e.to.clone(), label));
        }
        raw.build()
    }
}

impl Diagram {
    pub fn to_json(&self) -> DiagramJson {
        DiagramJson::from_diagram(self)
    }

    pub fn from_json_str(s: &str) -> Result<Diagram> {
        let j: DiagramJson = serde_json::from_str(s).map_err(|e| Error::Parse {
            line: e.line(),
            col: e.column(),
            msg: e.to_string(),
        })?;
        j.to_diagram()
    }
}
