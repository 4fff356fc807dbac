#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bindsig/errors.hpp"

namespace bindsig {

// Contexts are nameless: a context is just the number of variables in
// scope, and variables are de Bruijn indices 0..size-1.  Binding k fresh
// variables puts them at indices 0..k-1 and shifts everything that was
// already in scope up by k.
using Ctx = std::size_t;

// A renaming is a total map dom -> cod on variable indices, stored as an
// array.  It does not need to be injective or monotone.
struct Renaming {
    Ctx cod = 0;
    std::vector<std::size_t> map; // map.size() is the domain

    Ctx dom() const { return map.size(); }

    std::size_t operator()(std::size_t i) const {
        if (i >= map.size())
            throw ScopeError("renaming applied to index " + std::to_string(i) +
                             " outside domain of size " + std::to_string(map.size()));
        return map[i];
    }
};

inline Renaming identity_renaming(Ctx n) {
    Renaming r;
    r.cod = n;
    r.map.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.map[i] = i;
    return r;
}

// g after f: (compose(g, f))(i) = g(f(i)).
inline Renaming compose(const Renaming& g, const Renaming& f) {
    if (f.cod != g.dom())
        throw ScopeError("renaming composition mismatch: inner codomain " +
                         std::to_string(f.cod) + " vs outer domain " +
                         std::to_string(g.dom()));
    Renaming r;
    r.cod = g.cod;
    r.map.resize(f.dom());
    for (std::size_t i = 0; i < f.dom(); ++i) r.map[i] = g(f(i));
    return r;
}

// Push a renaming under k binders: the k fresh variables are fixed at
// indices 0..k-1 and the old ones move up by k on both sides.
inline Renaming extend(const Renaming& f, std::size_t k) {
    Renaming r;
    r.cod = f.cod + k;
    r.map.resize(f.dom() + k);
    for (std::size_t j = 0; j < k; ++j) r.map[j] = j;
    for (std::size_t i = 0; i < f.dom(); ++i) r.map[k + i] = k + f(i);
    return r;
}

// The weakening n -> n+k that makes room for k fresh variables at the
// bottom: i |-> k+i.
inline Renaming weakening(Ctx n, std::size_t k) {
    Renaming r;
    r.cod = n + k;
    r.map.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.map[i] = k + i;
    return r;
}

inline bool operator==(const Renaming& a, const Renaming& b) {
    return a.cod == b.cod && a.map == b.map;
}
inline bool operator!=(const Renaming& a, const Renaming& b) { return !(a == b); }

} // namespace bindsig
