//! Reading and classifying JSON inputs.

use std::fs;
use std::io::Read;

use serde::de::DeserializeOwned;
use serde_json::Value;

use orbicoh::charpair::PairSpec;
use orbicoh::fan::FanSpec;
use orbicoh::polytope::PolytopeSpec;
use orbicoh::towers::{HirzebruchParams, TowerSpec};

use crate::CliError;

#[derive(Clone, Debug)]
pub enum Input {
    Polytope(PolytopeSpec),
    Pair(PairSpec),
    Fan(FanSpec),
    Tower(TowerSpec),
    Hirzebruch(HirzebruchParams),
}

impl Input {
    pub fn kind(&self) -> &'static str {
        match self {
            Input::Polytope(_) => "polytope",
            Input::Pair(_) => "pair",
            Input::Fan(_) => "fan",
            Input::Tower(_) => "tower",
            Input::Hirzebruch(_) => "hirzebruch",
        }
    }
}

/// Inline JSON when the argument starts with `{`, standard input for `-`,
/// otherwise a file path.
pub fn read_source(arg: &str) -> Result<(String, String), CliError> {
    if arg.trim_start().starts_with('{') {
        return Ok(("<inline>".into(), arg.to_string()));
    }
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| CliError::Io(format!("<stdin>: {e}")))?;
        return Ok(("<stdin>".into(), s));
    }
    let text = fs::read_to_string(arg).map_err(|e| CliError::Io(format!("{arg}: {e}")))?;
    Ok((arg.to_string(), text))
}

fn typed<T: DeserializeOwned>(source: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        origin: source.to_string(),
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })
}

fn strip_position(msg: &str) -> String {
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg.to_string(),
    }
}

/// Classifies the object by its keys, then deserializes the text again with the
/// matching schema so that errors carry a position.
pub fn parse_input(source: &str, text: &str) -> Result<Input, CliError> {
    let value: Value = typed(source, text)?;
    let Value::Object(map) = &value else {
        return Err(CliError::Parse {
            origin: source.to_string(),
            line: 1,
            column: 1,
            message: "expected a JSON object".into(),
        });
    };
    let has = |k: &str| map.contains_key(k);
    if has("lambda") {
        Ok(Input::Pair(typed(source, text)?))
    } else if has("rays") {
        Ok(Input::Fan(typed(source, text)?))
    } else if has("weights") {
        Ok(Input::Tower(typed(source, text)?))
    } else if has("alpha") || has("a1") {
        Ok(Input::Hirzebruch(typed(source, text)?))
    } else if has("vertices") {
        Ok(Input::Polytope(typed(source, text)?))
    } else {
        Err(CliError::Parse {
            origin: source.to_string(),
            line: 1,
            column: 1,
            message: "unrecognised input: expected a polytope (\"vertices\"), pair (\"lambda\"), \
                      fan (\"rays\"), tower (\"weights\") or Hirzebruch parameters (\"alpha\" or \"a1\")"
                .into(),
        })
    }
}
