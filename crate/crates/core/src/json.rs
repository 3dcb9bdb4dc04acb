//! Canonical JSON output: keys sorted, compact unless pretty.

use serde::Serialize;
use serde_json::Value;

/// Serializes through [`Value`], whose maps keep keys in sorted order.
pub fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("output types serialize to JSON")
}

pub fn to_string<T: Serialize>(value: &T, pretty: bool) -> String {
    let v = to_value(value);
    if pretty {
        serde_json::to_string_pretty(&v).expect("values serialize")
    } else {
        serde_json::to_string(&v).expect("values serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    #[test]
    fn keys_are_sorted_and_compact() {
        let m: HashMap<&str, u8> = [("z", 1), ("a", 2), ("m", 3)].into();
        assert_eq!(to_string(&m, false), r#"{"a":2,"m":3,"z":1}"#);
        assert!(to_string(&m, true).contains("\n  \"a\": 2"));
    }
}
