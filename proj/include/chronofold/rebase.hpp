#pragma once

#include "chronofold/document.hpp"

namespace chronofold {

/// Discards history: the visible text becomes one sequential insertion by
/// doc's author on top of a fresh root. Text, weave and log coincide, and the
/// author, shift and next co-structures hold a single entry each.
inline Document rebase(const Document& doc) {
  Document out = Document::create(doc.author());
  LogIndex prev = 1;
  for (char32_t c : doc.text()) {
    out.local_insert(prev, c);
    ++prev;
  }
  return out;
}

}  // namespace chronofold
