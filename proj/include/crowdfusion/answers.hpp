#pragma once

#include <cstdint>
#include <vector>

// Answer alphabet and codeword helpers. A task over M classes is split into
// N binary questions; each worker returns a word over {0, 1, skip}.

namespace crowdfusion {

enum class AnswerSymbol : std::uint8_t { Zero = 0, One = 1, Skip = 2 };

struct AnswerWord {
    int worker_id = 0;
    std::vector<AnswerSymbol> symbols;

    // number of definitive (non-skip) entries
    int n_definitive() const {
        int n = 0;
        for (auto s : symbols)
            if (s != AnswerSymbol::Skip) ++n;
        return n;
    }

    int length() const { return static_cast<int>(symbols.size()); }
};

struct TruthWord {
    int class_index = 0;
    std::vector<int> bits; // MSB first
};

// class index -> N bits, most significant first: encode_class(5, 3) = 1,0,1
inline TruthWord encode_class(int class_index, int n_bits) {
    TruthWord t;
    t.class_index = class_index;
    t.bits.resize(static_cast<std::size_t>(n_bits));
    for (int i = 0; i < n_bits; ++i)
        t.bits[static_cast<std::size_t>(i)] = (class_index >> (n_bits - 1 - i)) & 1;
    return t;
}

// Marker for a decoded bit pattern that is not one of the M valid classes.
// Callers count it as a misclassification, never as a crash.
constexpr int kInvalidCodeword = -1;

inline int decode_class(const std::vector<int>& bits, int n_classes) {
    int v = 0;
    for (int b : bits) v = (v << 1) | (b & 1);
    return v < n_classes ? v : kInvalidCodeword;
}

} // namespace crowdfusion
