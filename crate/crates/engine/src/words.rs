//! Word accounting. A word is one integer, rational or id.

pub trait Words {
    fn words(&self) -> usize;
}

macro_rules! one_word {
    ($($t:ty),*) => {
        $(impl Words for $t {
            fn words(&self) -> usize {
                1
            }
        })*
    };
}

one_word!(u8, u16, u32, u64, usize, i32, i64, isize, bool, f32, f64);

impl Words for () {
    fn words(&self) -> usize {
        0
    }
}

impl<T: Words> Words for Vec<T> {
    fn words(&self) -> usize {
        self.iter().map(Words::words).sum()
    }
}

impl<T: Words> Words for [T] {
    fn words(&self) -> usize {
        self.iter().map(Words::words).sum()
    }
}

impl<T: Words> Words for Option<T> {
    fn words(&self) -> usize {
        self.as_ref().map_or(0, Words::words)
    }
}

impl<T: Words + ?Sized> Words for Box<T> {
    fn words(&self) -> usize {
        (**self).words()
    }
}

impl<T: Words + ?Sized> Words for &T {
    fn words(&self) -> usize {
        (**self).words()
    }
}

impl<A: Words, B: Words> Words for (A, B) {
    fn words(&self) -> usize {
        self.0.words() + self.1.words()
    }
}

impl<A: Words, B: Words, C: Words> Words for (A, B, C) {
    fn words(&self) -> usize {
        self.0.words() + self.1.words() + self.2.words()
    }
}

impl<A: Words, B: Words, C: Words, D: Words> Words for (A, B, C, D) {
    fn words(&self) -> usize {
        self.0.words() + self.1.words() + self.2.words() + self.3.words()
    }
}

/// Words for a packed bit vector: one word per 64 flags.
pub fn bitset_words(bits: usize) -> usize {
    bits.div_ceil(64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_counts() {
        assert_eq!(vec![(1u32, 2u64), (3, 4)].words(), 4);
        assert_eq!(Some(vec![1usize; 5]).words(), 5);
        assert_eq!(None::<u64>.words(), 0);
        assert_eq!(bitset_words(65), 2);
        assert_eq!(().words(), 0);
    }
}
