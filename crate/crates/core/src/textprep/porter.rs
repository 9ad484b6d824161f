//! Porter's suffix-stripping stemmer (1980), following the reference C
//! implementation including its `bli -> ble` and `logi -> log` step-2 rules.
//!
//! Operates on lowercase ASCII words. Anything else is returned unchanged.

struct Word {
    b: Vec<u8>,
}

impl Word {
    fn cons(&self, i: usize) -> bool {
        match self.b[i] {
            b'a' | b'e' | b'i' | b'o' | b'u' => false,
            b'y' => i == 0 || !self.cons(i - 1),
            _ => true,
        }
    }

    /// Number of VC sequences in `b[..end]`.
    fn measure(&self, end: usize) -> usize {
        let mut n = 0;
        let mut i = 0;
        loop {
            if i >= end {
                return 0;
            }
            if !self.cons(i) {
                break;
            }
            i += 1;
        }
        i += 1;
        loop {
            loop {
                if i >= end {
                    return n;
                }
                if self.cons(i) {
                    break;
                }
                i += 1;
            }
            i += 1;
            n += 1;
            loop {
                if i >= end {
                    return n;
                }
                if !self.cons(i) {
                    break;
                }
                i += 1;
            }
            i += 1;
        }
    }

    fn vowel_in(&self, end: usize) -> bool {
        (0..end).any(|i| !self.cons(i))
    }

    fn double_cons(&self, i: usize) -> bool {
        i >= 1 && self.b[i] == self.b[i - 1] && self.cons(i)
    }

    fn cvc(&self, i: usize) -> bool {
        i >= 2
            && self.cons(i)
            && !self.cons(i - 1)
            && self.cons(i - 2)
            && !matches!(self.b[i], b'w' | b'x' | b'y')
    }

    /// Stem length if the word ends with `suffix`.
    fn ends(&self, suffix: &str) -> Option<usize> {
        self.b
            .ends_with(suffix.as_bytes())
            .then(|| self.b.len() - suffix.len())
    }

    fn set_to(&mut self, stem: usize, rep: &str) {
        self.b.truncate(stem);
        self.b.extend_from_slice(rep.as_bytes());
    }

    fn last(&self) -> u8 {
        *self.b.last().unwrap_or(&0)
    }

    fn step1ab(&mut self) {
        if self.last() == b's' {
            if self.ends("sses").is_some() {
                self.b.truncate(self.b.len() - 2);
            } else if let Some(s) = self.ends("ies") {
                self.set_to(s, "i");
            } else if self.b.len() >= 2 && self.b[self.b.len() - 2] != b's' {
                self.b.pop();
            }
        }
        if let Some(s) = self.ends("eed") {
            if self.measure(s) > 0 {
                self.b.pop();
            }
            return;
        }
        let Some(s) = self.ends("ed").or_else(|| self.ends("ing")) else {
            return;
        };
        if !self.vowel_in(s) {
            return;
        }
        self.b.truncate(s);
        if let Some(s) = self.ends("at") {
            self.set_to(s, "ate");
        } else if let Some(s) = self.ends("bl") {
            self.set_to(s, "ble");
        } else if let Some(s) = self.ends("iz") {
            self.set_to(s, "ize");
        } else if self.b.len() >= 2 && self.double_cons(self.b.len() - 1) {
            if !matches!(self.last(), b'l' | b's' | b'z') {
                self.b.pop();
            }
        } else if self.measure(self.b.len()) == 1 && !self.b.is_empty() && self.cvc(self.b.len() - 1) {
            self.b.push(b'e');
        }
    }

    fn step1c(&mut self) {
        if let Some(s) = self.ends("y") {
            if self.vowel_in(s) {
                let n = self.b.len();
                self.b[n - 1] = b'i';
            }
        }
    }

    /// Replaces the first matching suffix when the remaining stem has m > `min_m`.
    fn replace_first(&mut self, rules: &[(&str, &str)], min_m: usize) {
        for (suffix, rep) in rules {
            if let Some(s) = self.ends(suffix) {
                if self.measure(s) > min_m {
                    self.set_to(s, rep);
                }
                return;
            }
        }
    }

    fn step2(&mut self) {
        const RULES: &[(&str, &str)] = &[
            ("ational", "ate"),
            ("tional", "tion"),
            ("enci", "ence"),
            ("anci", "ance"),
            ("izer", "ize"),
            ("bli", "ble"),
            ("alli", "al"),
            ("entli", "ent"),
            ("eli", "e"),
            ("ousli", "ous"),
            ("ization", "ize"),
            ("ation", "ate"),
            ("ator", "ate"),
            ("alism", "al"),
            ("iveness", "ive"),
            ("fulness", "ful"),
            ("ousness", "ous"),
            ("aliti", "al"),
            ("iviti", "ive"),
            ("biliti", "ble"),
            ("logi", "log"),
        ];
        self.replace_first(RULES, 0);
    }

    fn step3(&mut self) {
        const RULES: &[(&str, &str)] = &[
            ("icate", "ic"),
            ("ative", ""),
            ("alize", "al"),
            ("iciti", "ic"),
            ("ical", "ic"),
            ("ful", ""),
            ("ness", ""),
        ];
        self.replace_first(RULES, 0);
    }

    fn step4(&mut self) {
        const SUFFIXES: &[&str] = &[
            "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment", "ent", "ion",
            "ou", "ism", "ate", "iti", "ous", "ive", "ize",
        ];
        for suffix in SUFFIXES {
            if let Some(s) = self.ends(suffix) {
                if *suffix == "ion" && !(s >= 1 && matches!(self.b[s - 1], b's' | b't')) {
                    return;
                }
                if self.measure(s) > 1 {
                    self.b.truncate(s);
                }
                return;
            }
        }
    }

    fn step5(&mut self) {
        let n = self.b.len();
        if self.last() == b'e' {
            let m = self.measure(n);
            if m > 1 || (m == 1 && !(n >= 2 && self.cvc(n - 2))) {
                self.b.pop();
            }
        }
        let n = self.b.len();
        if self.last() == b'l' && self.double_cons(n - 1) && self.measure(n) > 1 {
            self.b.pop();
        }
    }
}

/// One pass of the Porter algorithm.
pub fn porter_stem(word: &str) -> String {
    if word.len() <= 2 || !word.bytes().all(|c| c.is_ascii_lowercase()) {
        return word.to_string();
    }
    let mut w = Word {
        b: word.as_bytes().to_vec(),
    };
    w.step1ab();
    if w.b.len() > 1 {
        w.step1c();
        w.step2();
        w.step3();
        w.step4();
        w.step5();
    }
    String::from_utf8(w.b).expect("ascii")
}
