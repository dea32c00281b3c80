use std::collections::HashMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::gains::gain_from_yields;
use super::{side_weights, SourcePair};
use crate::error::{Error, Result};
use crate::optics::{Basis, YieldTable};
use crate::source::TriggerClass;

/// One observed gain: intensities `(x, y)`, basis and trigger class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainRecord {
    pub basis: Basis,
    #[serde(rename = "x")]
    pub alice_intensity: f64,
    #[serde(rename = "y")]
    pub bob_intensity: f64,
    #[serde(rename = "class")]
    pub trigger_class: TriggerClass,
    pub gain: f64,
    pub qber: f64,
}

impl GainRecord {
    /// `E * S`.
    pub fn error_gain(&self) -> f64 {
        self.qber * self.gain
    }

    fn key(&self) -> RecordKey {
        (self.basis, self.alice_intensity.to_bits(), self.bob_intensity.to_bits(), self.trigger_class)
    }
}

type RecordKey = (Basis, u64, u64, TriggerClass);

/// Observed gains, unique per `(basis, x, y, class)`. Intensities match by
/// exact value.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GainTable {
    records: Vec<GainRecord>,
    index: HashMap<RecordKey, usize>,
}

impl GainTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn records(&self) -> &[GainRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn insert(&mut self, rec: GainRecord) -> Result<()> {
        for (name, v) in [("gain", rec.gain), ("qber", rec.qber)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::Domain(format!("{name} = {v} is not a probability")));
            }
        }
        let key = rec.key();
        if self.index.contains_key(&key) {
            return Err(Error::Domain(format!(
                "duplicate gain record ({}, {}, {}, {})",
                rec.basis, rec.alice_intensity, rec.bob_intensity, rec.trigger_class
            )));
        }
        self.index.insert(key, self.records.len());
        self.records.push(rec);
        Ok(())
    }

    pub fn get(&self, basis: Basis, x: f64, y: f64, class: TriggerClass) -> Option<&GainRecord> {
        self.index.get(&(basis, x.to_bits(), y.to_bits(), class)).map(|&i| &self.records[i])
    }

    pub fn require(&self, basis: Basis, x: f64, y: f64, class: TriggerClass) -> Result<&GainRecord> {
        self.get(basis, x, y, class)
            .ok_or_else(|| Error::MissingRecord(format!("basis {basis}, x = {x}, y = {y}, class {class}")))
    }

    /// Simulates the four records `(x,y)`, `(x,0)`, `(0,y)`, `(0,0)` the
    /// estimator needs for `pair`; records already present are left alone.
    pub fn observe(&mut self, yt: &YieldTable, pair: &SourcePair) -> Result<()> {
        let (x, y) = (pair.alice.intensity(), pair.bob.intensity());
        for (xa, yb) in [(x, y), (x, 0.0), (0.0, y), (0.0, 0.0)] {
            let rec_key = (yt.basis(), xa.to_bits(), yb.to_bits(), pair.class());
            if self.index.contains_key(&rec_key) {
                continue;
            }
            let wa = side_weights(&pair.alice.with_intensity(xa)?, yt.cutoff());
            let wb = side_weights(&pair.bob.with_intensity(yb)?, yt.cutoff());
            let g = gain_from_yields(&wa, &wb, yt)?;
            self.insert(GainRecord {
                basis: yt.basis(),
                alice_intensity: xa,
                bob_intensity: yb,
                trigger_class: pair.class(),
                gain: g.gain,
                qber: g.qber,
            })?;
        }
        Ok(())
    }

    /// CSV with header `basis,x,y,class,gain,qber`; floats use the shortest
    /// representation that parses back to the same value.
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(sink);
        for rec in &self.records {
            w.serialize(rec)?;
        }
        if self.records.is_empty() {
            w.write_record(["basis", "x", "y", "class", "gain", "qber"])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(source: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(source);
        let mut table = GainTable::new();
        for rec in r.deserialize() {
            table.insert(rec?)?;
        }
        Ok(table)
    }
}
