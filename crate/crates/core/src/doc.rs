//! JSON document schemas for spaces, maps, and games, and the conversions
//! between documents and the in-memory types.
//!
//! Documents use labels, never indices, so files stay readable and stable
//! under reordering of internal structures. A map document may carry its
//! space inline or point at a separate space file; resolving the path is the
//! caller's job since this layer does no IO.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::derived::DerivedMetric;
use crate::error::{Error, Result};
use crate::expr::Formula;
use crate::games::{Game, PayoffSource};
use crate::setvalued::SetValuedMap;
use crate::space::{Combiner, FiniteMetricSpace, PointSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbeddingDoc {
    pub dim: usize,
    pub coords: Vec<Vec<f64>>,
}

/// A finite metric space, either as a full distance table or as a euclidean
/// point embedding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceDoc {
    pub points: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distances: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embedding: Option<EmbeddingDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metric: Option<String>,
}

impl SpaceDoc {
    pub fn parse(text: &str) -> Result<SpaceDoc> {
        serde_json::from_str(text).map_err(|e| Error::input(format!("bad space document: {}", e)))
    }

    pub fn to_space(&self) -> Result<FiniteMetricSpace> {
        match (&self.distances, &self.embedding) {
            (Some(_), Some(_)) => Err(Error::input(
                "space document carries both distances and an embedding",
            )),
            (None, None) => Err(Error::input(
                "space document needs either distances or an embedding",
            )),
            (Some(table), None) => {
                if self.metric.is_some() {
                    return Err(Error::input(
                        "metric field only applies to embedded spaces",
                    ));
                }
                FiniteMetricSpace::from_table(self.points.clone(), table.clone())
            }
            (None, Some(emb)) => {
                match self.metric.as_deref() {
                    None | Some("euclidean") => {}
                    Some(other) => {
                        return Err(Error::input(format!(
                            "unsupported embedding metric '{}'",
                            other
                        )))
                    }
                }
                if let Some(row) = emb.coords.iter().find(|c| c.len() != emb.dim) {
                    return Err(Error::input(format!(
                        "embedding row has {} coordinates, dim is {}",
                        row.len(),
                        emb.dim
                    )));
                }
                FiniteMetricSpace::from_coords(self.points.clone(), &emb.coords)
            }
        }
    }

    pub fn from_space(space: &FiniteMetricSpace) -> SpaceDoc {
        SpaceDoc {
            points: space.labels().to_vec(),
            distances: Some(space.rows()),
            embedding: None,
            metric: None,
        }
    }
}

/// Inline space or the path of a space file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceRef {
    Path(String),
    Inline(SpaceDoc),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub space: SpaceRef,
    pub images: BTreeMap<String, Vec<String>>,
}

impl MapDoc {
    pub fn parse(text: &str) -> Result<MapDoc> {
        serde_json::from_str(text).map_err(|e| Error::input(format!("bad map document: {}", e)))
    }

    /// Builds the map against an already-resolved space. Every point needs
    /// an image entry and every named label must exist.
    pub fn to_map(&self, space: &FiniteMetricSpace) -> Result<SetValuedMap> {
        for key in self.images.keys() {
            if space.index_of(key).is_none() {
                return Err(Error::input(format!("image key '{}' is not a point", key)));
            }
        }
        let n = space.len();
        let mut images = Vec::with_capacity(n);
        for i in 0..n {
            let label = space.label(i);
            let targets = self.images.get(label).ok_or_else(|| {
                Error::input(format!("no image listed for point '{}'", label))
            })?;
            let mut members = Vec::with_capacity(targets.len());
            for t in targets {
                let j = space.index_of(t).ok_or_else(|| {
                    Error::input(format!("image of '{}' names unknown point '{}'", label, t))
                })?;
                members.push(j);
            }
            images.push(PointSet::new(members, n).map_err(|_| {
                Error::input(format!("image of '{}' must be nonempty", label))
            })?);
        }
        SetValuedMap::new(n, images)
    }

    pub fn from_map(space: &FiniteMetricSpace, map: &SetValuedMap) -> MapDoc {
        let images = (0..map.len())
            .map(|i| {
                let labels = map
                    .image(i)
                    .members()
                    .iter()
                    .map(|&j| space.label(j).to_string())
                    .collect();
                (space.label(i).to_string(), labels)
            })
            .collect();
        MapDoc {
            space: SpaceRef::Inline(SpaceDoc::from_space(space)),
            images,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase", deny_unknown_fields)]
pub enum PayoffDoc {
    /// Per-player payoff arrays nested by player order, innermost index
    /// ranging over the last player's strategies.
    Table { data: Vec<Value> },
    Expression { formulas: Vec<String> },
}

fn default_combiner() -> String {
    "max".to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameDoc {
    pub players: usize,
    pub strategies: Vec<SpaceDoc>,
    pub payoffs: PayoffDoc,
    #[serde(default = "default_combiner")]
    pub combiner: String,
}

fn flatten_table(v: &Value, sizes: &[usize], out: &mut Vec<f64>) -> Result<()> {
    match sizes.split_first() {
        None => match v.as_f64() {
            Some(x) => {
                out.push(x);
                Ok(())
            }
            None => Err(Error::input(format!("payoff entry {} is not a number", v))),
        },
        Some((&head, rest)) => {
            let arr = v
                .as_array()
                .ok_or_else(|| Error::input(format!("payoff level {} is not an array", v)))?;
            if arr.len() != head {
                return Err(Error::input(format!(
                    "payoff array has {} entries, expected {}",
                    arr.len(),
                    head
                )));
            }
            for item in arr {
                flatten_table(item, rest, out)?;
            }
            Ok(())
        }
    }
}

fn nest_table(flat: &[f64], sizes: &[usize]) -> Value {
    match sizes.split_first() {
        None => Value::from(flat[0]),
        Some((&head, rest)) => {
            let chunk = flat.len() / head;
            Value::Array(
                (0..head)
                    .map(|k| nest_table(&flat[k * chunk..(k + 1) * chunk], rest))
                    .collect(),
            )
        }
    }
}

impl GameDoc {
    pub fn parse(text: &str) -> Result<GameDoc> {
        serde_json::from_str(text).map_err(|e| Error::input(format!("bad game document: {}", e)))
    }

    pub fn to_game(&self) -> Result<Game> {
        if self.players != self.strategies.len() {
            return Err(Error::input(format!(
                "players is {} but {} strategy spaces are listed",
                self.players,
                self.strategies.len()
            )));
        }
        let spaces = self
            .strategies
            .iter()
            .map(|d| d.to_space())
            .collect::<Result<Vec<_>>>()?;
        let sizes: Vec<usize> = spaces.iter().map(|s| s.len()).collect();
        let combiner: Combiner = self.combiner.parse()?;
        let payoffs = match &self.payoffs {
            PayoffDoc::Table { data } => {
                if data.len() != self.players {
                    return Err(Error::input(format!(
                        "{} payoff tables for {} players",
                        data.len(),
                        self.players
                    )));
                }
                let tables = data
                    .iter()
                    .map(|v| {
                        let mut flat = Vec::new();
                        flatten_table(v, &sizes, &mut flat)?;
                        Ok(flat)
                    })
                    .collect::<Result<Vec<_>>>()?;
                PayoffSource::Table(tables)
            }
            PayoffDoc::Expression { formulas } => {
                let parsed = formulas
                    .iter()
                    .map(|src| Formula::parse(src, self.players))
                    .collect::<Result<Vec<_>>>()?;
                PayoffSource::Expression(parsed)
            }
        };
        Game::new(spaces, payoffs, combiner)
    }

    pub fn from_game(game: &Game) -> GameDoc {
        let payoffs = match game.payoffs() {
            PayoffSource::Table(tables) => PayoffDoc::Table {
                data: tables
                    .iter()
                    .map(|flat| nest_table(flat, game.sizes()))
                    .collect(),
            },
            PayoffSource::Expression(formulas) => PayoffDoc::Expression {
                formulas: formulas.iter().map(|f| f.source().to_string()).collect(),
            },
        };
        GameDoc {
            players: game.players(),
            strategies: game
                .strategy_spaces()
                .iter()
                .map(SpaceDoc::from_space)
                .collect(),
            payoffs,
            combiner: game.combiner().to_string(),
        }
    }
}

/// Output form of a chain or path metric: scale, kind, and the table with
/// null marking unreachable pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivedDoc {
    pub kind: String,
    pub scale: f64,
    pub distances: Vec<Vec<Option<f64>>>,
}

impl DerivedDoc {
    pub fn from_derived(d: &DerivedMetric) -> DerivedDoc {
        DerivedDoc {
            kind: format!("{:?}", d.kind()).to_lowercase(),
            scale: d.scale(),
            distances: d.rows(),
        }
    }
}
