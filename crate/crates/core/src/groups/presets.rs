use super::{GroupSpec, MarkedGroup};
use crate::error::GroupError;

/// Built-in group specs, `(name, json)`.
pub const PRESETS: &[(&str, &str)] = &[
    ("trivial", include_str!("../../presets/trivial.json")),
    ("zsquared", include_str!("../../presets/zsquared.json")),
    ("z2xz2", include_str!("../../presets/z2xz2.json")),
    ("s3", include_str!("../../presets/s3.json")),
    ("sl2z", include_str!("../../presets/sl2z.json")),
    ("free2", include_str!("../../presets/free2.json")),
];

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|(n, _)| *n).collect()
}

pub fn preset_spec(name: &str) -> Result<GroupSpec, GroupError> {
    let (_, text) = PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| GroupError::UnknownPreset(name.to_string()))?;
    GroupSpec::from_json(text)
}

pub fn preset(name: &str) -> Result<MarkedGroup, GroupError> {
    preset_spec(name)?.build()
}
