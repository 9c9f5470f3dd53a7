#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "curator/document.hpp"

namespace curator {

struct AssociationRow {
    std::string word;
    double tfidf_score = 0.0;
    double delta_from_mean = 0.0;
};

struct AssociationTable {
    std::string subgroup_term;
    std::vector<AssociationRow> rows; // descending delta; only tfidf > 0
    int64_t corpus_doc_count = 0;
    int64_t selected_doc_count = 0;
};

// Exact occurrence counts of each term over the lowercased word-tokenized
// corpus. Terms must be lowercase; throws on an empty term list.
std::map<std::string, int64_t> term_distribution(const std::vector<Document>& corpus,
                                                 const std::vector<std::string>& terms);

// Five-step association procedure:
//   1. vocabulary = words occurring at least twice in the corpus
//   2. select the documents containing the subgroup term
//   3. TF-IDF per co-occurring vocabulary word: TF = raw count over the
//      selected subcorpus, IDF = ln(N / df) over the full corpus
//   4. delta = word TF-IDF - mean TF-IDF over all co-occurring words
//   5. keep rows with TF-IDF > 0
// An absent term yields an empty table. Throws when the corpus has fewer
// than two documents.
AssociationTable tfidf_association(const std::vector<Document>& corpus,
                                   const std::string& subgroup_term);

std::vector<AssociationTable> tfidf_association(const std::vector<Document>& corpus,
                                                const std::vector<std::string>& subgroup_terms);

// TSV: word, tfidf, delta per row.
void write_association_table(std::ostream& out, const AssociationTable& table, size_t top_k = 0);

} // namespace curator
