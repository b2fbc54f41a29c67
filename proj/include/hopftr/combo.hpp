#pragma once

#include "hopftr/rational.hpp"
#include "hopftr/tagged_graph.hpp"

#include <map>
#include <sstream>
#include <string>
#include <utility>

namespace hopftr {

/// Formal Q-linear combination of tagged graphs; zero coefficients absent,
/// keys canonical.
struct Combo {
    std::map<TaggedGraph, Rational> terms;

    static Combo zero() { return {}; }

    static Combo of(const TaggedGraph& g, const Rational& c = 1) {
        Combo x;
        if (c != 0) x.terms.emplace(g, c);
        return x;
    }

    bool is_zero() const { return terms.empty(); }

    void add(const TaggedGraph& g, const Rational& c) {
        if (c == 0) return;
        auto [it, fresh] = terms.emplace(g, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }

    friend Combo operator+(const Combo& a, const Combo& b) {
        Combo out = a;
        for (auto& [g, c] : b.terms) out.add(g, c);
        return out;
    }

    friend Combo operator-(const Combo& a, const Combo& b) {
        Combo out = a;
        for (auto& [g, c] : b.terms) out.add(g, -c);
        return out;
    }

    Combo scaled(const Rational& c) const {
        Combo out;
        if (c == 0) return out;
        for (auto& [g, k] : terms) out.terms.emplace(g, k * c);
        return out;
    }

    friend bool operator==(const Combo& a, const Combo& b) { return a.terms == b.terms; }

    std::string str() const {
        if (terms.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [g, c] : terms) {
            Rational ac = c < 0 ? Rational(-c) : c;
            if (first) {
                if (c < 0) os << "-";
                first = false;
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            if (ac != 1) os << ac.str() << "*";
            os << g.key();
        }
        return os.str();
    }
};

/// Formal Q-linear combination of ordered graph pairs.
struct TensorCombo {
    std::map<std::pair<TaggedGraph, TaggedGraph>, Rational> terms;

    static TensorCombo zero() { return {}; }

    bool is_zero() const { return terms.empty(); }

    void add(const TaggedGraph& l, const TaggedGraph& r, const Rational& c) {
        if (c == 0) return;
        auto [it, fresh] = terms.emplace(std::make_pair(l, r), c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0) terms.erase(it);
        }
    }

    friend TensorCombo operator+(const TensorCombo& a, const TensorCombo& b) {
        TensorCombo out = a;
        for (auto& [k, c] : b.terms) out.add(k.first, k.second, c);
        return out;
    }

    friend TensorCombo operator-(const TensorCombo& a, const TensorCombo& b) {
        TensorCombo out = a;
        for (auto& [k, c] : b.terms) out.add(k.first, k.second, -c);
        return out;
    }

    friend bool operator==(const TensorCombo& a, const TensorCombo& b) {
        return a.terms == b.terms;
    }

    std::string str() const {
        if (terms.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [k, c] : terms) {
            Rational ac = c < 0 ? Rational(-c) : c;
            if (first) {
                if (c < 0) os << "-";
                first = false;
            } else {
                os << (c < 0 ? " - " : " + ");
            }
            if (ac != 1) os << ac.str() << "*";
            os << k.first.key() << " (x) " << k.second.key();
        }
        return os.str();
    }
};

}  // namespace hopftr
