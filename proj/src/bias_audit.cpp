#include "curator/bias_audit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "curator/text_util.hpp"

namespace curator {

std::map<std::string, int64_t> term_distribution(const std::vector<Document>& corpus,
                                                 const std::vector<std::string>& terms) {
    if (terms.empty()) throw std::invalid_argument("empty term list");
    std::map<std::string, int64_t> counts;
    for (const std::string& t : terms) counts[t] = 0;
    for (const Document& doc : corpus) {
        for (const std::string& w : word_tokenize(doc.text)) {
            auto it = counts.find(w);
            if (it != counts.end()) ++it->second;
        }
    }
    return counts;
}

AssociationTable tfidf_association(const std::vector<Document>& corpus,
                                   const std::string& subgroup_term) {
    if (corpus.size() < 2) throw std::invalid_argument("corpus needs at least two documents");

    AssociationTable table;
    table.subgroup_term = subgroup_term;
    table.corpus_doc_count = static_cast<int64_t>(corpus.size());

    // one tokenization pass: corpus frequency, document frequency, and the
    // selected subcorpus counts
    std::unordered_map<std::string, int64_t> corpus_freq;
    std::unordered_map<std::string, int64_t> doc_freq;
    std::unordered_map<std::string, int64_t> selected_tf;
    std::unordered_set<std::string> co_occurring;

    std::vector<std::vector<std::string>> tokenized(corpus.size());
    for (size_t i = 0; i < corpus.size(); ++i) {
        tokenized[i] = word_tokenize(corpus[i].text);
        std::unordered_set<std::string> uniq;
        for (const std::string& w : tokenized[i]) {
            ++corpus_freq[w];
            uniq.insert(w);
        }
        for (const std::string& w : uniq) ++doc_freq[w];
    }

    for (size_t i = 0; i < corpus.size(); ++i) {
        bool selected = false;
        for (const std::string& w : tokenized[i])
            if (w == subgroup_term) {
                selected = true;
                break;
            }
        if (!selected) continue;
        ++table.selected_doc_count;
        for (const std::string& w : tokenized[i]) {
            ++selected_tf[w];
            co_occurring.insert(w);
        }
    }
    if (table.selected_doc_count == 0) return table;

    double n_docs = static_cast<double>(corpus.size());
    std::vector<AssociationRow> rows;
    double tfidf_sum = 0.0;
    for (const std::string& w : co_occurring) {
        if (corpus_freq.at(w) < 2) continue; // vocabulary cut
        double tf = static_cast<double>(selected_tf.at(w));
        double idf = std::log(n_docs / static_cast<double>(doc_freq.at(w)));
        AssociationRow row;
        row.word = w;
        row.tfidf_score = tf * idf;
        tfidf_sum += row.tfidf_score;
        rows.push_back(std::move(row));
    }
    if (rows.empty()) return table;

    double mean = tfidf_sum / static_cast<double>(rows.size());
    for (AssociationRow& row : rows) row.delta_from_mean = row.tfidf_score - mean;

    rows.erase(std::remove_if(rows.begin(), rows.end(),
                              [](const AssociationRow& r) { return !(r.tfidf_score > 0.0); }),
               rows.end());
    std::sort(rows.begin(), rows.end(), [](const AssociationRow& a, const AssociationRow& b) {
        if (a.delta_from_mean != b.delta_from_mean) return a.delta_from_mean > b.delta_from_mean;
        return a.word < b.word;
    });
    table.rows = std::move(rows);
    return table;
}

std::vector<AssociationTable> tfidf_association(const std::vector<Document>& corpus,
                                                const std::vector<std::string>& subgroup_terms) {
    std::vector<AssociationTable> tables;
    tables.reserve(subgroup_terms.size());
    for (const std::string& term : subgroup_terms)
        tables.push_back(tfidf_association(corpus, term));
    return tables;
}

void write_association_table(std::ostream& out, const AssociationTable& table, size_t top_k) {
    out << "# term: " << table.subgroup_term << " (docs: " << table.selected_doc_count << " of "
        << table.corpus_doc_count << ")\n";
    out << "word\ttfidf\tdelta_from_mean\n";
    size_t limit = top_k == 0 ? table.rows.size() : std::min(top_k, table.rows.size());
    for (size_t i = 0; i < limit; ++i) {
        const AssociationRow& r = table.rows[i];
        out << r.word << '\t' << r.tfidf_score << '\t' << r.delta_from_mean << '\n';
    }
}

} // namespace curator
