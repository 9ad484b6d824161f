use unicode_normalization::UnicodeNormalization;

/// Decodes the HTML entities that tweet archives commonly carry.
pub(crate) fn decode_entities(s: &str) -> String {
    if !s.contains('&') {
        return s.to_string();
    }
    let mut out = String::with_capacity(s.len());
    let mut rest = s;
    while let Some(pos) = rest.find('&') {
        out.push_str(&rest[..pos]);
        rest = &rest[pos..];
        let decoded = rest.find(';').filter(|&end| end <= 10).and_then(|end| {
            let name = &rest[1..end];
            let ch = match name {
                "amp" => Some('&'),
                "lt" => Some('<'),
                "gt" => Some('>'),
                "quot" => Some('"'),
                "apos" => Some('\''),
                "nbsp" => Some(' '),
                _ => name
                    .strip_prefix("#x")
                    .or_else(|| name.strip_prefix("#X"))
                    .and_then(|h| u32::from_str_radix(h, 16).ok())
                    .or_else(|| name.strip_prefix('#').and_then(|d| d.parse().ok()))
                    .and_then(char::from_u32),
            };
            ch.map(|c| (c, end))
        });
        match decoded {
            Some((c, end)) => {
                out.push(c);
                rest = &rest[end + 1..];
            }
            None => {
                out.push('&');
                rest = &rest[1..];
            }
        }
    }
    out.push_str(rest);
    out
}

/// Whole-token emoticons that contain letters or digits and would otherwise
/// survive punctuation removal (`:D`, `xP`, `<3`). Pure-punctuation ones like
/// `:-)` vanish anyway.
pub(crate) fn is_emoticon(tok: &str) -> bool {
    if tok == "<3" || tok == "</3" {
        return true;
    }
    let t = tok.trim_start_matches(['>', '}', ']']);
    let mut chars = t.chars();
    let Some(eyes) = chars.next() else {
        return false;
    };
    let rest: Vec<char> = chars.collect();
    let (nose, mouth) = match rest.first() {
        Some('-' | 'o' | '^' | '\'' | '’') if rest.len() > 1 => (true, &rest[1..]),
        _ => (false, &rest[..]),
    };
    if mouth.is_empty() {
        return false;
    }
    let wide = |c: &char| "()[]{}DPpOo3Ss/\\|*$@>X".contains(*c);
    let narrow = |c: &char| "()DPO".contains(*c);
    match eyes {
        ':' | ';' | '=' => mouth.iter().all(wide),
        'x' | 'X' | '8' => (nose || mouth.len() <= 2) && mouth.iter().all(narrow),
        _ => false,
    }
}

fn find_url_start(tok: &str) -> Option<usize> {
    let lower = tok.to_ascii_lowercase();
    ["http://", "https://", "www."]
        .iter()
        .filter_map(|p| lower.find(p))
        .filter(|&i| {
            // `www.` must not sit inside a word.
            i == 0 || !tok[..i].chars().next_back().is_some_and(char::is_alphanumeric)
        })
        .min()
}

fn is_apostrophe(c: char) -> bool {
    matches!(c, '\'' | '’' | 'ʼ')
}

/// Appends the cleaned words of one non-URL fragment to `out`.
fn push_words(fragment: &str, mention_token: &str, out: &mut Vec<String>) {
    let mut word = String::new();
    let mut chars = fragment.chars().peekable();
    let mut prev_alnum = false;
    let flush = |word: &mut String, out: &mut Vec<String>| {
        if !word.is_empty() {
            out.push(std::mem::take(word));
        }
    };
    while let Some(c) = chars.next() {
        if c == '@' && !prev_alnum && chars.peek().is_some_and(|n| n.is_alphanumeric() || *n == '_') {
            while chars.peek().is_some_and(|n| n.is_alphanumeric() || *n == '_') {
                chars.next();
            }
            flush(&mut word, out);
            out.push(mention_token.to_string());
            prev_alnum = false;
            continue;
        }
        if c.is_alphanumeric() {
            word.extend(c.to_lowercase());
            prev_alnum = true;
        } else if is_apostrophe(c) && prev_alnum {
            // Joins contractions and possessives.
        } else {
            flush(&mut word, out);
            prev_alnum = false;
        }
    }
    flush(&mut word, out);
}

/// Normalization with explicit placeholder tokens for URLs and mentions.
pub fn normalize_with(text: &str, url_token: &str, mention_token: &str) -> String {
    let text: String = text.nfc().collect();
    let text = decode_entities(&text);
    let mut words = Vec::new();
    for tok in text.split_whitespace() {
        if is_emoticon(tok) {
            continue;
        }
        match find_url_start(tok) {
            Some(i) => {
                push_words(&tok[..i], mention_token, &mut words);
                words.push(url_token.to_string());
            }
            None => push_words(tok, mention_token, &mut words),
        }
    }
    words.join(" ")
}
