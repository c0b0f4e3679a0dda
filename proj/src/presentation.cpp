#include <algorithm>
#include <cstdlib>
#include <map>

#include "disco/chassis.hpp"
#include "disco/error.hpp"

namespace disco {

void free_reduce(Word& w) {
    std::size_t top = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (top > 0 && w[top - 1] == -w[i])
            --top;
        else
            w[top++] = w[i];
    }
    w.resize(top);
}

void cyclic_reduce(Word& w) {
    free_reduce(w);
    std::size_t lo = 0;
    std::size_t hi = w.size();
    while (hi - lo >= 2 && w[lo] == -w[hi - 1]) {
        ++lo;
        --hi;
    }
    if (lo > 0) w = Word(w.begin() + static_cast<std::ptrdiff_t>(lo), w.begin() + static_cast<std::ptrdiff_t>(hi));
}

namespace {

Word inverse(const Word& w) {
    Word out(w.rbegin(), w.rend());
    for (auto& x : out) x = -x;
    return out;
}

std::uint32_t gen_index(std::int32_t letter) { return static_cast<std::uint32_t>(std::abs(letter) - 1); }

}  // namespace

SimplifiedPresentation simplify_presentation(const Presentation& p, SimplifyBudget budget) {
    const std::size_t n = p.generators.size();
    std::vector<Word> rel;
    for (const auto& r : p.relations) {
        Word w;
        if (r.ab >= 0) w.push_back(r.ab + 1);
        if (r.bc >= 0) w.push_back(r.bc + 1);
        if (r.ac >= 0) w.push_back(-(r.ac + 1));
        cyclic_reduce(w);
        if (!w.empty()) rel.push_back(std::move(w));
    }

    std::vector<char> rel_live(rel.size(), 1);
    std::vector<char> gen_live(n, 1);
    std::vector<std::vector<std::uint32_t>> occurs(n);
    std::size_t total = 0;
    for (std::uint32_t r = 0; r < rel.size(); ++r) {
        total += rel[r].size();
        for (auto x : rel[r]) occurs[gen_index(x)].push_back(r);
    }
    // Bucket queue keyed by relator length; stale entries are skipped.
    std::vector<std::vector<std::uint32_t>> buckets(budget.max_relator_length + 1);
    auto push = [&](std::uint32_t r) {
        if (rel[r].size() <= budget.max_relator_length) buckets[rel[r].size()].push_back(r);
    };
    for (std::uint32_t r = 0; r < rel.size(); ++r) push(r);

    SimplifiedPresentation out;
    out.original_generators = n;
    std::vector<std::uint32_t> stamp(rel.size(), 0);
    std::uint32_t round = 0;

    for (std::size_t len = 1; len <= budget.max_relator_length;) {
        if (buckets[len].empty()) {
            ++len;
            continue;
        }
        const std::uint32_t r = buckets[len].back();
        buckets[len].pop_back();
        if (!rel_live[r] || rel[r].size() != len) continue;

        // Highest-numbered generator occurring exactly once in r.
        std::map<std::uint32_t, int> count;
        for (auto x : rel[r]) ++count[gen_index(x)];
        std::size_t pos = rel[r].size();
        for (std::size_t i = 0; i < rel[r].size(); ++i) {
            const auto g = gen_index(rel[r][i]);
            if (count[g] == 1 && (pos == rel[r].size() || g > gen_index(rel[r][pos]))) pos = i;
        }
        if (pos == rel[r].size()) continue;

        // r = u g^s v, cyclically g^s (v u) = 1, so g^s = (v u)^-1.
        const std::int32_t letter = rel[r][pos];
        const std::uint32_t g = gen_index(letter);
        Word tail(rel[r].begin() + static_cast<std::ptrdiff_t>(pos) + 1, rel[r].end());
        tail.insert(tail.end(), rel[r].begin(), rel[r].begin() + static_cast<std::ptrdiff_t>(pos));
        Word repl = letter > 0 ? inverse(tail) : tail;
        free_reduce(repl);
        const Word repl_inv = inverse(repl);

        rel_live[r] = 0;
        total -= rel[r].size();
        gen_live[g] = 0;
        out.log.push_back({static_cast<std::int32_t>(g), repl});

        ++round;
        std::size_t min_touched = len;
        const auto users = std::move(occurs[g]);
        occurs[g].clear();
        for (auto q : users) {
            if (!rel_live[q] || stamp[q] == round) continue;
            stamp[q] = round;
            Word next;
            bool touched = false;
            for (auto x : rel[q]) {
                if (gen_index(x) == g) {
                    const Word& piece = x > 0 ? repl : repl_inv;
                    next.insert(next.end(), piece.begin(), piece.end());
                    touched = true;
                } else {
                    next.push_back(x);
                }
            }
            if (!touched) continue;
            cyclic_reduce(next);
            total = total - rel[q].size() + next.size();
            if (total > budget.max_total_length)
                throw BudgetExhausted("presentation simplification exceeded its total length budget");
            rel[q] = std::move(next);
            if (rel[q].empty()) {
                rel_live[q] = 0;
                continue;
            }
            for (auto x : repl) occurs[gen_index(x)].push_back(q);
            push(q);
            min_touched = std::min(min_touched, rel[q].size());
        }
        len = std::max<std::size_t>(1, min_touched);
    }

    for (std::uint32_t g = 0; g < n; ++g)
        if (gen_live[g]) out.alive.push_back(static_cast<std::int32_t>(g));
    for (std::uint32_t r = 0; r < rel.size(); ++r)
        if (rel_live[r]) out.relators.push_back(rel[r]);
    std::sort(out.relators.begin(), out.relators.end());
    out.relators.erase(std::unique(out.relators.begin(), out.relators.end()), out.relators.end());
    return out;
}

Word SimplifiedPresentation::rewrite(const Word& word, std::size_t max_length) const {
    std::vector<const Word*> repl(original_generators, nullptr);
    for (const auto& e : log) repl[static_cast<std::size_t>(e.generator)] = &e.replacement;

    // Fully expanded, reduced images of eliminated generators, filled lazily.
    // Replacements only mention generators eliminated later, so the log in
    // reverse order gives a valid evaluation order.
    std::vector<Word> image(original_generators);
    std::vector<char> ready(original_generators, 0);
    for (auto it = log.rbegin(); it != log.rend(); ++it) {
        Word w;
        for (auto x : it->replacement) {
            const auto g = gen_index(x);
            if (repl[g] == nullptr) {
                w.push_back(x);
                continue;
            }
            const Word& img = image[g];
            if (x > 0)
                w.insert(w.end(), img.begin(), img.end());
            else
                for (auto y = img.rbegin(); y != img.rend(); ++y) w.push_back(-*y);
            if (w.size() > max_length) free_reduce(w);
            if (w.size() > max_length) throw BudgetExhausted("word rewrite exceeded its length budget");
        }
        free_reduce(w);
        if (w.size() > max_length) throw BudgetExhausted("word rewrite exceeded its length budget");
        image[static_cast<std::size_t>(it->generator)] = std::move(w);
        ready[static_cast<std::size_t>(it->generator)] = 1;
    }

    Word out;
    for (auto x : word) {
        const auto g = gen_index(x);
        if (g >= original_generators) throw Error("MalformedInput", "word letter outside the generator range");
        if (!ready[g]) {
            out.push_back(x);
            continue;
        }
        const Word& img = image[g];
        if (x > 0)
            out.insert(out.end(), img.begin(), img.end());
        else
            for (auto y = img.rbegin(); y != img.rend(); ++y) out.push_back(-*y);
        if (out.size() > max_length) {
            free_reduce(out);
            if (out.size() > max_length) throw BudgetExhausted("word rewrite exceeded its length budget");
        }
    }
    free_reduce(out);
    return out;
}

}  // namespace disco
