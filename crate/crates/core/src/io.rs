//! Versioned JSON documents for the external file formats.
//!
//! Every document carries a `schema` tag checked on load, so format drift
//! fails loudly instead of deserializing garbage.

use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::graph::GraphConfig;
use crate::qecc::QeccLayout;
use crate::schedule::Schedule;
use crate::secondary::SecondaryGraph;

pub const CIRCUIT_SCHEMA: &str = "bhwalk-circuit-v1";
pub const GRAPH_SCHEMA: &str = "bhwalk-graph-v1";
pub const SCHEDULE_SCHEMA: &str = "bhwalk-schedule-v1";
pub const SECONDARY_SCHEMA: &str = "bhwalk-secondary-v1";
pub const LAYOUT_SCHEMA: &str = "bhwalk-layout-v1";

#[derive(Serialize, Deserialize)]
struct Document<T> {
    schema: String,
    #[serde(flatten)]
    body: T,
}

fn to_document<T: Serialize>(schema: &str, body: &T) -> String {
    let doc = Document {
        schema: schema.to_string(),
        body,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable document");
    text.push('\n');
    text
}

fn from_document<T: DeserializeOwned>(schema: &str, text: &str) -> Result<T> {
    let doc: Document<T> =
        serde_json::from_str(text).map_err(|e| Error::BadDocument(format!("invalid JSON: {e}")))?;
    if doc.schema != schema {
        return Err(Error::BadDocument(format!(
            "schema {:?} does not match expected {schema:?}",
            doc.schema
        )));
    }
    Ok(doc.body)
}

pub fn circuit_to_json(circuit: &Circuit) -> String {
    to_document(CIRCUIT_SCHEMA, circuit)
}

pub fn circuit_from_json(text: &str) -> Result<Circuit> {
    let circuit: Circuit = from_document(CIRCUIT_SCHEMA, text)?;
    circuit.validate()?;
    Ok(circuit)
}

pub fn graph_to_json(config: &GraphConfig) -> String {
    to_document(GRAPH_SCHEMA, config)
}

pub fn graph_from_json(text: &str) -> Result<GraphConfig> {
    let config: GraphConfig = from_document(GRAPH_SCHEMA, text)?;
    config.validate()?;
    Ok(config)
}

pub fn schedule_to_json(schedule: &Schedule) -> String {
    to_document(SCHEDULE_SCHEMA, schedule)
}

pub fn schedule_from_json(text: &str) -> Result<Schedule> {
    from_document(SCHEDULE_SCHEMA, text)
}

pub fn secondary_to_json(graph: &SecondaryGraph) -> String {
    to_document(SECONDARY_SCHEMA, graph)
}

pub fn secondary_from_json(text: &str) -> Result<SecondaryGraph> {
    from_document(SECONDARY_SCHEMA, text)
}

pub fn layout_to_json(layout: &QeccLayout) -> String {
    to_document(LAYOUT_SCHEMA, layout)
}

pub fn layout_from_json(text: &str) -> Result<QeccLayout> {
    from_document(LAYOUT_SCHEMA, text)
}
