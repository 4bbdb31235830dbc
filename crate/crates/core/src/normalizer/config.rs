use std::path::Path;

use serde::{Deserialize, Serialize};

use super::charset::RemovalTable;
use super::entities;
use crate::config::ConfigFile;
use crate::{Error, Result};

pub const DEFAULT_URL_PLACEHOLDER: &str = "[ رابط ]";
pub const DEFAULT_EMAIL_PLACEHOLDER: &str = "[ بريد ]";
pub const DEFAULT_MENTION_PLACEHOLDER: &str = "[ مستخدم ]";

/// Keys understood by [`NormalizationConfig::from_config`].
pub const CONFIG_KEYS: &[&str] = &[
    "markup_strip",
    "unwanted_chars",
    "repeat_collapse",
    "space_collapse",
    "boundary_insert",
    "entity_replace",
    "strip_tatweel_diacritics",
    "max_repeat_run",
    "placeholder_url",
    "placeholder_email",
    "placeholder_mention",
    "removal_table",
    "removal_extra",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizationConfig {
    pub markup_strip: bool,
    pub unwanted_chars: bool,
    pub repeat_collapse: bool,
    pub space_collapse: bool,
    pub boundary_insert: bool,
    pub entity_replace: bool,
    /// Off by default: tatweel and diacritics are kept.
    pub strip_tatweel_diacritics: bool,
    pub max_repeat_run: usize,
    pub placeholder_url: String,
    pub placeholder_email: String,
    pub placeholder_mention: String,
    pub removal: RemovalTable,
}

impl Default for NormalizationConfig {
    fn default() -> Self {
        Self {
            markup_strip: true,
            unwanted_chars: true,
            repeat_collapse: true,
            space_collapse: true,
            boundary_insert: true,
            entity_replace: true,
            strip_tatweel_diacritics: false,
            max_repeat_run: 2,
            placeholder_url: DEFAULT_URL_PLACEHOLDER.to_string(),
            placeholder_email: DEFAULT_EMAIL_PLACEHOLDER.to_string(),
            placeholder_mention: DEFAULT_MENTION_PLACEHOLDER.to_string(),
            removal: RemovalTable::default(),
        }
    }
}

impl NormalizationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_repeat_run == 0 {
            return Err(Error::Config("max_repeat_run must be at least 1".into()));
        }
        for (name, value) in self.placeholders() {
            if value.trim().is_empty() {
                return Err(Error::Config(format!("placeholder_{name} is empty")));
            }
            if value.contains('\n') || value.contains('\r') {
                return Err(Error::Config(format!(
                    "placeholder_{name} contains a newline"
                )));
            }
            if value != value.trim() {
                return Err(Error::Config(format!(
                    "placeholder_{name} has leading or trailing whitespace"
                )));
            }
            if entities::contains_entity(value) {
                return Err(Error::Config(format!(
                    "placeholder_{name} itself looks like a URL, email or mention"
                )));
            }
        }
        Ok(())
    }

    pub fn placeholders(&self) -> [(&'static str, &str); 3] {
        [
            ("url", self.placeholder_url.as_str()),
            ("email", self.placeholder_email.as_str()),
            ("mention", self.placeholder_mention.as_str()),
        ]
    }

    /// Reads the normalizer keys from a parsed config file. Relative
    /// `removal_table` paths resolve against `base_dir`.
    pub fn from_config(cfg: &ConfigFile, base_dir: Option<&Path>) -> Result<Self> {
        let mut out = Self::default();
        let flags: [(&str, &mut bool); 7] = [
            ("markup_strip", &mut out.markup_strip),
            ("unwanted_chars", &mut out.unwanted_chars),
            ("repeat_collapse", &mut out.repeat_collapse),
            ("space_collapse", &mut out.space_collapse),
            ("boundary_insert", &mut out.boundary_insert),
            ("entity_replace", &mut out.entity_replace),
            (
                "strip_tatweel_diacritics",
                &mut out.strip_tatweel_diacritics,
            ),
        ];
        for (key, slot) in flags {
            if let Some(v) = cfg.get_bool(key)? {
                *slot = v;
            }
        }
        if let Some(n) = cfg.get_usize("max_repeat_run")? {
            out.max_repeat_run = n;
        }
        if let Some(v) = cfg.get("placeholder_url") {
            out.placeholder_url = v.to_string();
        }
        if let Some(v) = cfg.get("placeholder_email") {
            out.placeholder_email = v.to_string();
        }
        if let Some(v) = cfg.get("placeholder_mention") {
            out.placeholder_mention = v.to_string();
        }
        if let Some(path) = cfg.get("removal_table") {
            let path = match base_dir {
                Some(dir) => dir.join(path),
                None => path.into(),
            };
            let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
            out.removal = RemovalTable::parse(&text)?;
        }
        if let Some(list) = cfg.get("removal_extra") {
            out.removal.extend(RemovalTable::parse_inline(list)?);
        }
        out.validate()?;
        Ok(out)
    }
}
