//! Calibration-curve record (TOML). `a` is stored in SI: Hz per
//! permittivity unit for `fdr_p`, percent for `sensitivity_p`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::DataError;
use crate::sensing::{CalibrationCurve, CurveKind};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationRecord {
    /// Free-form provenance (input file, point count, ...).
    #[serde(default)]
    pub metadata: BTreeMap<String, String>,
    #[serde(default, rename = "curve")]
    pub curves: Vec<CalibrationCurve>,
}

impl CalibrationRecord {
    pub fn curve(&self, kind: CurveKind) -> Option<&CalibrationCurve> {
        self.curves.iter().find(|c| c.kind == kind)
    }
}

pub fn write_calibration(record: &CalibrationRecord) -> Result<String, DataError> {
    toml::to_string(record).map_err(|e| DataError::Calibration(e.to_string()))
}

pub fn read_calibration(text: &str) -> Result<CalibrationRecord, DataError> {
    let record: CalibrationRecord = toml::from_str(text)
        .map_err(|e| DataError::Calibration(e.to_string().trim().to_owned()))?;
    if record.curves.is_empty() {
        return Err(DataError::Calibration("no [[curve]] entries".into()));
    }
    for (index, c) in record.curves.iter().enumerate() {
        c.validate()
            .map_err(|source| DataError::Curve { index, source })?;
    }
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record() -> CalibrationRecord {
        CalibrationRecord {
            metadata: BTreeMap::from([("points".to_owned(), "10".to_owned())]),
            curves: vec![
                CalibrationCurve {
                    a: 3.09e9,
                    b: -0.9926,
                    r2: 0.9994,
                    domain: [5.0, 78.3],
                    kind: CurveKind::FdrP,
                },
                CalibrationCurve {
                    a: 46.62,
                    b: -0.92,
                    r2: 0.9997,
                    domain: [5.0, 78.3],
                    kind: CurveKind::SensitivityP,
                },
            ],
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let text = write_calibration(&record()).unwrap();
        assert!(text.contains("[[curve]]") && text.contains("kind = \"fdr_p\""));
        assert_eq!(read_calibration(&text).unwrap(), record());
        assert_eq!(
            write_calibration(&read_calibration(&text).unwrap()).unwrap(),
            text
        );
    }

    #[test]
    fn invalid_records() {
        assert!(read_calibration("").is_err());
        let text = write_calibration(&record())
            .unwrap()
            .replacen("b = -0.9926", "b = 0.5", 1);
        assert!(matches!(
            read_calibration(&text),
            Err(DataError::Curve { index: 0, .. })
        ));
        let text = write_calibration(&record()).unwrap().replacen(
            "r2 = 0.9994",
            "r2 = 0.9994\nextra = 1",
            1,
        );
        assert!(read_calibration(&text).is_err());
    }
}
