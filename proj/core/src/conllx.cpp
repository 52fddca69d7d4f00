#include "neuromst/conllx.hpp"

#include <fstream>
#include <sstream>

#include "neuromst/errors.hpp"

namespace neuromst {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

int parse_int(const std::string& s, const char* what, int line_no) {
  if (s.empty()) throw ParseError(std::string("empty ") + what, line_no);
  std::size_t pos = 0;
  int value = 0;
  try {
    value = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw ParseError(std::string("non-numeric ") + what + " '" + s + "'", line_no);
  }
  if (pos != s.size()) throw ParseError(std::string("non-numeric ") + what + " '" + s + "'", line_no);
  return value;
}

Token make_root() {
  Token root;
  root.id = 0;
  root.form = kRootForm;
  root.pos = kRootForm;
  root.cpos = kRootForm;
  root.deprel = "_";
  root.head = -1;
  return root;
}

void finish_sentence(std::vector<Token>& body, const std::vector<int>& body_lines,
                     std::vector<Sentence>& out) {
  if (body.empty()) return;
  const int n = static_cast<int>(body.size());
  for (int i = 0; i < n; ++i) {
    if (body[i].head > n) {
      throw ParseError("HEAD " + std::to_string(body[i].head) + " out of range for sentence of " +
                           std::to_string(n) + " tokens",
                       body_lines[i]);
    }
  }
  Sentence s;
  s.tokens.reserve(body.size() + 1);
  s.tokens.push_back(make_root());
  for (auto& t : body) s.tokens.push_back(std::move(t));
  out.push_back(std::move(s));
  body.clear();
}

}  // namespace

const std::string& effective_pos(const Token& token) {
  return token.pos != "_" ? token.pos : token.cpos;
}

Sentence make_sentence(std::vector<Token> body) {
  Sentence s;
  s.tokens.reserve(body.size() + 1);
  s.tokens.push_back(make_root());
  for (auto& t : body) s.tokens.push_back(std::move(t));
  return s;
}

std::vector<Sentence> read_conllx(std::istream& in) {
  std::vector<Sentence> out;
  std::vector<Token> body;
  std::vector<int> body_lines;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      finish_sentence(body, body_lines, out);
      body_lines.clear();
      continue;
    }
    if (line[0] == '#') continue;

    const std::vector<std::string> f = split_tabs(line);
    if (f.size() != 10) {
      throw ParseError("expected 10 tab-separated columns, found " + std::to_string(f.size()),
                       line_no);
    }
    Token t;
    t.id = parse_int(f[0], "ID", line_no);
    if (t.id != static_cast<int>(body.size()) + 1) {
      throw ParseError("token ID " + std::to_string(t.id) + " breaks the sequence (expected " +
                           std::to_string(body.size() + 1) + ")",
                       line_no);
    }
    t.form = f[1];
    t.lemma = f[2];
    t.cpos = f[3];
    t.pos = f[4];
    t.feats = f[5];
    if (f[6] == "_") {
      t.head = -1;
    } else {
      t.head = parse_int(f[6], "HEAD", line_no);
      if (t.head < 0) throw ParseError("negative HEAD " + std::to_string(t.head), line_no);
    }
    t.deprel = f[7];
    t.phead = f[8];
    t.pdeprel = f[9];
    body.push_back(std::move(t));
    body_lines.push_back(line_no);
  }
  finish_sentence(body, body_lines, out);
  return out;
}

std::vector<Sentence> read_conllx_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path, 0);
  return read_conllx(in);
}

void write_conllx(std::ostream& out, const std::vector<Sentence>& sentences) {
  for (std::size_t si = 0; si < sentences.size(); ++si) {
    const Sentence& s = sentences[si];
    for (int i = 1; i <= s.n(); ++i) {
      const Token& t = s.tokens[i];
      if (t.head < 0) {
        throw OutputError("token " + std::to_string(i) + " of sentence " + std::to_string(si + 1) +
                          " has no head to write");
      }
      out << i << '\t' << (t.form.empty() ? "_" : t.form) << '\t' << t.lemma << '\t' << t.cpos
          << '\t' << t.pos << '\t' << t.feats << '\t' << t.head << '\t'
          << (t.deprel.empty() ? "_" : t.deprel) << '\t' << t.phead << '\t' << t.pdeprel << '\n';
    }
    out << '\n';
  }
}

void write_conllx_file(const std::string& path, const std::vector<Sentence>& sentences) {
  std::ofstream out(path);
  if (!out) throw OutputError("cannot open file for writing: " + path);
  write_conllx(out, sentences);
}

}  // namespace neuromst
