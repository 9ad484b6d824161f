use std::io::BufRead;

use chrono::{DateTime, SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geo {
    pub lat: f64,
    pub lon: f64,
}

impl Geo {
    pub fn new(lat: f64, lon: f64) -> Result<Self> {
        if !(-90.0..=90.0).contains(&lat) || !(-180.0..=180.0).contains(&lon) {
            return Err(Error::schema("geo", format!("({lat}, {lon}) outside valid range")));
        }
        Ok(Geo { lat, lon })
    }
}

/// One message with the metadata counted in corpus statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TweetRecord {
    pub id: String,
    pub text: String,
    pub created_at: Option<DateTime<Utc>>,
    pub author_id: Option<String>,
    pub is_retweet: bool,
    pub lang: Option<String>,
    /// Lowercase, without the `#`.
    pub hashtags: Vec<String>,
    pub mentions: Vec<String>,
    pub urls: Vec<String>,
    pub geo: Option<Geo>,
    pub in_reply_to: Option<String>,
}

impl TweetRecord {
    /// A record with entities extracted from `text` and no other metadata.
    pub fn new(id: impl Into<String>, text: &str) -> Result<Self> {
        let text = normalized_text(text)?;
        let (hashtags, mentions, urls) = extract_entities(&text);
        Ok(TweetRecord {
            id: id.into(),
            text,
            created_at: None,
            author_id: None,
            is_retweet: false,
            lang: None,
            hashtags,
            mentions,
            urls,
            geo: None,
            in_reply_to: None,
        })
    }

    /// English, or no language declared.
    pub fn is_english_or_unknown(&self) -> bool {
        match &self.lang {
            None => true,
            Some(l) => {
                let primary = l.split(['-', '_']).next().unwrap_or("");
                primary.eq_ignore_ascii_case("en")
            }
        }
    }

    /// Canonical JSON object; [`parse_record`] reads it back unchanged.
    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("id".into(), json!(self.id));
        m.insert("text".into(), json!(self.text));
        if let Some(t) = &self.created_at {
            m.insert(
                "created_at".into(),
                json!(t.to_rfc3339_opts(SecondsFormat::AutoSi, true)),
            );
        }
        if let Some(a) = &self.author_id {
            m.insert("user".into(), json!({ "id": a }));
        }
        m.insert("retweeted".into(), json!(self.is_retweet));
        if let Some(l) = &self.lang {
            m.insert("lang".into(), json!(l));
        }
        m.insert(
            "entities".into(),
            json!({
                "hashtags": self.hashtags.iter().map(|h| json!({ "text": h })).collect::<Vec<_>>(),
                "user_mentions": self.mentions.iter().map(|u| json!({ "screen_name": u })).collect::<Vec<_>>(),
                "urls": self.urls.iter().map(|u| json!({ "expanded_url": u })).collect::<Vec<_>>(),
            }),
        );
        if let Some(g) = &self.geo {
            m.insert("geo".into(), json!({ "lat": g.lat, "lon": g.lon }));
        }
        if let Some(r) = &self.in_reply_to {
            m.insert("in_reply_to_status_id_str".into(), json!(r));
        }
        Value::Object(m)
    }

    pub fn to_ndjson_line(&self) -> String {
        self.to_json().to_string()
    }
}

fn normalized_text(text: &str) -> Result<String> {
    let t: String = text.nfc().collect();
    if t.trim().is_empty() {
        return Err(Error::schema("text", "empty after normalization"));
    }
    Ok(t)
}

fn id_like(v: &Value) -> Option<String> {
    match v {
        Value::String(s) if !s.is_empty() => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn str_field<'a>(obj: &'a Map<String, Value>, keys: &[&str]) -> Option<&'a str> {
    keys.iter().find_map(|k| obj.get(*k).and_then(Value::as_str))
}

fn parse_timestamp(s: &str) -> Result<DateTime<Utc>> {
    if let Ok(t) = DateTime::parse_from_rfc3339(s) {
        return Ok(t.with_timezone(&Utc));
    }
    // Classic API form: "Wed Oct 10 20:19:24 +0000 2018".
    DateTime::parse_from_str(s, "%a %b %d %H:%M:%S %z %Y")
        .map(|t| t.with_timezone(&Utc))
        .map_err(|_| Error::schema("created_at", format!("unrecognised timestamp `{s}`")))
}

fn entity_list(v: Option<&Value>, keys: &[&str]) -> Vec<String> {
    let Some(Value::Array(items)) = v else {
        return Vec::new();
    };
    items
        .iter()
        .filter_map(|it| match it {
            Value::String(s) => Some(s.clone()),
            Value::Object(o) => str_field(o, keys).map(str::to_string),
            _ => None,
        })
        .filter(|s| !s.is_empty())
        .collect()
}

fn clean_hashtag(h: &str) -> Option<String> {
    let h = h.trim_start_matches('#').to_lowercase();
    (!h.is_empty()).then_some(h)
}

fn parse_geo(obj: &Map<String, Value>) -> Result<Option<Geo>> {
    let pair = |v: &Value| -> Option<(f64, f64)> {
        let a = v.as_array()?;
        Some((a.first()?.as_f64()?, a.get(1)?.as_f64()?))
    };
    if let Some(g) = obj.get("geo").filter(|g| !g.is_null()) {
        if let (Some(lat), Some(lon)) = (
            g.get("lat").and_then(Value::as_f64),
            g.get("lon").and_then(Value::as_f64),
        ) {
            return Geo::new(lat, lon).map(Some);
        }
        // Legacy field: [lat, lon].
        if let Some((lat, lon)) = g.get("coordinates").and_then(pair) {
            return Geo::new(lat, lon).map(Some);
        }
        return Err(Error::schema("geo", "expected {lat, lon} or coordinates"));
    }
    // GeoJSON point: [lon, lat].
    if let Some(c) = obj.get("coordinates").filter(|c| !c.is_null()) {
        return match c.get("coordinates").and_then(pair) {
            Some((lon, lat)) => Geo::new(lat, lon).map(Some),
            None => Err(Error::schema("coordinates", "expected GeoJSON point")),
        };
    }
    Ok(None)
}

/// Parses one NDJSON line into a record.
///
/// Entities come from an `entities` object when present, otherwise they are
/// pulled out of the text. Unknown fields are ignored.
pub fn parse_record(line: &str) -> Result<TweetRecord> {
    let value: Value = serde_json::from_str(line).map_err(|e| Error::Parse {
        offset: byte_offset(line, &e),
        message: e.to_string(),
    })?;
    let Value::Object(obj) = value else {
        return Err(Error::Parse {
            offset: 0,
            message: "expected a JSON object".into(),
        });
    };

    let id = obj
        .get("id")
        .and_then(id_like)
        .or_else(|| obj.get("id_str").and_then(id_like))
        .ok_or_else(|| Error::schema("id", "missing"))?;
    let raw_text = str_field(&obj, &["text", "full_text"]).ok_or_else(|| Error::schema("text", "missing"))?;
    let text = normalized_text(raw_text)?;

    let created_at = match obj.get("created_at") {
        Some(Value::String(s)) => Some(parse_timestamp(s)?),
        Some(Value::Null) | None => None,
        Some(_) => return Err(Error::schema("created_at", "expected a string")),
    };

    let author_id = obj
        .get("user")
        .and_then(|u| u.get("id").and_then(id_like).or_else(|| u.get("id_str").and_then(id_like)))
        .or_else(|| obj.get("author_id").and_then(id_like));

    let is_retweet = obj.get("retweeted").and_then(Value::as_bool).unwrap_or(false)
        || obj.get("is_retweet").and_then(Value::as_bool).unwrap_or(false)
        || obj.get("retweeted_status").is_some_and(|v| !v.is_null());

    let lang = str_field(&obj, &["lang"]).map(str::to_string);

    let (hashtags, mentions, urls) = match obj.get("entities") {
        Some(Value::Object(ent)) => (
            entity_list(ent.get("hashtags"), &["text", "tag"])
                .iter()
                .filter_map(|h| clean_hashtag(h))
                .collect(),
            entity_list(ent.get("user_mentions").or(ent.get("mentions")), &["screen_name", "username"])
                .into_iter()
                .map(|m| m.trim_start_matches('@').to_string())
                .collect(),
            entity_list(ent.get("urls"), &["expanded_url", "url"]),
        ),
        _ => extract_entities(&text),
    };

    let geo = parse_geo(&obj)?;

    let in_reply_to = obj
        .get("in_reply_to_status_id_str")
        .and_then(id_like)
        .or_else(|| obj.get("in_reply_to_status_id").and_then(id_like))
        .or_else(|| obj.get("in_reply_to").and_then(id_like));

    Ok(TweetRecord {
        id,
        text,
        created_at,
        author_id,
        is_retweet,
        lang,
        hashtags,
        mentions,
        urls,
        geo,
        in_reply_to,
    })
}

fn byte_offset(line: &str, e: &serde_json::Error) -> usize {
    if e.line() == 0 {
        return line.len();
    }
    let line_start: usize = line
        .split_inclusive('\n')
        .take(e.line() - 1)
        .map(str::len)
        .sum();
    (line_start + e.column().saturating_sub(1)).min(line.len())
}

fn is_entity_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Hashtags, mentions and URLs found in free text.
pub(crate) fn extract_entities(text: &str) -> (Vec<String>, Vec<String>, Vec<String>) {
    let mut hashtags = Vec::new();
    let mut mentions = Vec::new();
    let mut urls = Vec::new();
    for tok in text.split_whitespace() {
        let lower = tok.to_ascii_lowercase();
        if lower.starts_with("http://") || lower.starts_with("https://") {
            urls.push(tok.trim_end_matches(|c: char| ".,;:!?)\"'".contains(c)).to_string());
            continue;
        }
        let tok = tok.trim_start_matches(|c: char| !c.is_alphanumeric() && c != '#' && c != '@');
        let mut chars = tok.chars();
        let sigil = chars.next();
        let body: String = chars.take_while(|&c| is_entity_char(c)).collect();
        if body.is_empty() {
            continue;
        }
        match sigil {
            Some('#') => hashtags.push(body.to_lowercase()),
            Some('@') => mentions.push(body),
            _ => {}
        }
    }
    (hashtags, mentions, urls)
}

#[derive(Debug, Clone, Copy)]
pub struct ReadOptions {
    /// Drop records whose declared language is not English.
    pub english_only: bool,
}

impl Default for ReadOptions {
    fn default() -> Self {
        ReadOptions { english_only: true }
    }
}

/// Streams records from NDJSON input. Parse errors carry the byte offset from
/// the start of the stream. Blank lines are skipped.
pub struct RecordReader<R> {
    inner: R,
    opts: ReadOptions,
    offset: usize,
    buf: String,
    /// Records dropped by the language filter so far.
    pub dropped_lang: usize,
}

impl<R: BufRead> RecordReader<R> {
    pub fn new(inner: R, opts: ReadOptions) -> Self {
        RecordReader {
            inner,
            opts,
            offset: 0,
            buf: String::new(),
            dropped_lang: 0,
        }
    }
}

impl<R: BufRead> Iterator for RecordReader<R> {
    type Item = Result<TweetRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.buf.clear();
            let start = self.offset;
            let n = match self.inner.read_line(&mut self.buf) {
                Ok(0) => return None,
                Ok(n) => n,
                Err(e) => return Some(Err(Error::io("<input>", e))),
            };
            self.offset += n;
            let line = self.buf.trim_end_matches(['\n', '\r']);
            if line.trim().is_empty() {
                continue;
            }
            match parse_record(line) {
                Ok(r) if self.opts.english_only && !r.is_english_or_unknown() => {
                    self.dropped_lang += 1;
                }
                Ok(r) => return Some(Ok(r)),
                Err(Error::Parse { offset, message }) => {
                    return Some(Err(Error::Parse {
                        offset: start + offset,
                        message,
                    }))
                }
                Err(e) => return Some(Err(e)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    #[test]
    fn extracts_entities_from_text() {
        let r = parse_record(r#"{"id":"1","text":"hi #a @b http://x"}"#).unwrap();
        assert_eq!(r.hashtags, ["a"]);
        assert_eq!(r.mentions, ["b"]);
        assert_eq!(r.urls, ["http://x"]);
    }

    #[test]
    fn missing_text_names_field() {
        match parse_record(r#"{"id":"1"}"#) {
            Err(Error::Schema { field, .. }) => assert_eq!(field, "text"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_id_names_field() {
        match parse_record(r#"{"text":"x"}"#) {
            Err(Error::Schema { field, .. }) => assert_eq!(field, "id"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn malformed_json_reports_offset() {
        match parse_record(r#"{"id":"1","text":}"#) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 17),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_text_is_rejected() {
        assert!(matches!(
            parse_record(r#"{"id":"1","text":"   "}"#),
            Err(Error::Schema { .. })
        ));
    }

    #[test]
    fn twitter_shaped_record() {
        let line = r##"{"id":12,"text":"RT @x: #Autism day","created_at":"Wed Oct 10 20:19:24 +0000 2018",
            "user":{"id_str":"99"},"retweeted_status":{"id":3},"lang":"en",
            "entities":{"hashtags":[{"text":"Autism"}],"user_mentions":[{"screen_name":"x"}],"urls":[]},
            "coordinates":{"type":"Point","coordinates":[-0.12,51.5]},"in_reply_to_status_id":7}"##
            .replace('\n', "");
        let r = parse_record(&line).unwrap();
        assert_eq!(r.id, "12");
        assert!(r.is_retweet);
        assert_eq!(r.author_id.as_deref(), Some("99"));
        assert_eq!(r.hashtags, ["autism"]);
        assert_eq!(r.geo, Some(Geo { lat: 51.5, lon: -0.12 }));
        assert_eq!(r.in_reply_to.as_deref(), Some("7"));
        assert_eq!(r.created_at.unwrap().to_rfc3339(), "2018-10-10T20:19:24+00:00");
    }

    #[test]
    fn geo_out_of_range_is_rejected() {
        let line = r#"{"id":"1","text":"x","geo":{"lat":91.0,"lon":0.0}}"#;
        assert!(matches!(parse_record(line), Err(Error::Schema { .. })));
    }

    #[test]
    fn canonical_json_round_trips() {
        let line = r#"{"id":"5","text":"café #Tea","created_at":"2014-04-02T10:00:00.250Z","user":{"id":"u1"},"lang":"en","geo":{"lat":1.5,"lon":-2.25},"in_reply_to":"4"}"#;
        let r = parse_record(line).unwrap();
        assert_eq!(r.text, "caf\u{e9} #Tea");
        let again = parse_record(&r.to_ndjson_line()).unwrap();
        assert_eq!(r, again);
    }

    #[test]
    fn reader_filters_language_and_tracks_offsets() {
        let input = "{\"id\":\"1\",\"text\":\"a\",\"lang\":\"en\"}\n\n{\"id\":\"2\",\"text\":\"b\",\"lang\":\"fr\"}\n{\"id\":\"3\",\"text\":\"c\"}\n{bad\n";
        let mut reader = RecordReader::new(Cursor::new(input), ReadOptions::default());
        let ids: Vec<_> = reader.by_ref().take(2).map(|r| r.unwrap().id).collect();
        assert_eq!(ids, ["1", "3"]);
        assert_eq!(reader.dropped_lang, 1);
        match reader.next() {
            Some(Err(Error::Parse { offset, .. })) => {
                let bad_start = input.find("{bad").unwrap();
                assert_eq!(offset, bad_start + 1);
            }
            other => panic!("{other:?}"),
        }
        assert!(reader.next().is_none());
    }

    #[test]
    fn dotted_mention_is_extracted() {
        let (_, m, _) = extract_entities("on .@rediceradio now");
        assert_eq!(m, ["rediceradio"]);
    }
}
