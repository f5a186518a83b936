use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::Family;
use crate::setcore::{sumset, KSet, SumsetKey};

/// Two unordered pairs of sets with the same sumset.
///
/// Canonical form: `left.0 ⪯ left.1`, `right.0 ⪯ right.1` and
/// `left ≺ right` in the lexicographic order on pairs. `ell` is the number
/// of distinct sets among the four.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CollisionRecord {
    pub key: SumsetKey,
    pub left: (KSet, KSet),
    pub right: (KSet, KSet),
    pub ell: usize,
}

impl CollisionRecord {
    /// Canonicalizes two pairs into a record, checking the sumsets agree and
    /// the pairs differ.
    pub fn from_pairs(a: (KSet, KSet), b: (KSet, KSet)) -> Result<Self> {
        let order = |p: (KSet, KSet)| if p.0 <= p.1 { p } else { (p.1, p.0) };
        let (a, b) = (order(a), order(b));
        let key = sumset(&a.0, &a.1);
        if key != sumset(&b.0, &b.1) {
            return Err(Error::param("pairs do not have equal sumsets"));
        }
        if a == b {
            return Err(Error::param("pairs are identical"));
        }
        let (left, right) = if a < b { (a, b) } else { (b, a) };
        let ell = Family::distinct_count(&[&left.0, &left.1, &right.0, &right.1]);
        Ok(CollisionRecord {
            key,
            left,
            right,
            ell,
        })
    }

    pub fn sets(&self) -> [&KSet; 4] {
        [&self.left.0, &self.left.1, &self.right.0, &self.right.1]
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&RecordWire::from(self)).expect("record serializes")
    }

    pub fn from_json_line(line: &str) -> Result<Self> {
        let w: RecordWire = serde_json::from_str(line)?;
        let set = |v: Vec<u32>| KSet::from_elems(v);
        let [l0, l1] = w.left;
        let [r0, r1] = w.right;
        let rec = CollisionRecord::from_pairs((set(l0)?, set(l1)?), (set(r0)?, set(r1)?))?;
        if rec.key.sums() != w.key.as_slice() || rec.ell != w.ell {
            return Err(Error::param("record fields are inconsistent"));
        }
        Ok(rec)
    }
}

/// JSON-lines wire format of a collision record.
#[derive(Serialize, Deserialize)]
struct RecordWire {
    left: [Vec<u32>; 2],
    right: [Vec<u32>; 2],
    key: Vec<u32>,
    ell: usize,
}

impl From<&CollisionRecord> for RecordWire {
    fn from(r: &CollisionRecord) -> Self {
        RecordWire {
            left: [r.left.0.elements().to_vec(), r.left.1.elements().to_vec()],
            right: [r.right.0.elements().to_vec(), r.right.1.elements().to_vec()],
            key: r.key.sums().to_vec(),
            ell: r.ell,
        }
    }
}
