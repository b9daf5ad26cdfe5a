// Reader for the Reuters-21578 SGML distribution (reut2-000.sgm ...
// reut2-021.sgm). Each <REUTERS> element carries a NEWID attribute, a TOPICS
// list of <D> entries and, for most articles, a <BODY> inside <TEXT>.

#include <iterator>
#include <sstream>

#include "wvenrich/corpus.hpp"
#include "wvenrich/error.hpp"

namespace wvenrich {

namespace {

std::string_view between(std::string_view s, std::string_view open,
                         std::string_view close) {
  auto b = s.find(open);
  if (b == std::string_view::npos) return {};
  b += open.size();
  auto e = s.find(close, b);
  if (e == std::string_view::npos) return {};
  return s.substr(b, e - b);
}

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out.push_back(s[i]);
      continue;
    }
    auto semi = s.find(';', i);
    if (semi == std::string_view::npos || semi - i > 8) {
      out.push_back(s[i]);
      continue;
    }
    auto name = s.substr(i + 1, semi - i - 1);
    if (name == "lt") {
      out.push_back('<');
    } else if (name == "gt") {
      out.push_back('>');
    } else if (name == "amp") {
      out.push_back('&');
    } else if (name == "quot") {
      out.push_back('"');
    } else if (!name.empty() && name[0] == '#') {
      // Numeric references in this corpus are control characters (&#2;,
      // &#3;, &#31;) marking text boundaries; they become whitespace.
      out.push_back(' ');
    } else {
      out.append(s.substr(i, semi - i + 1));
    }
    i = semi;
  }
  return out;
}

// Bodies end with a "Reuter" signature line that is distribution markup,
// not article text.
std::string strip_signature(std::string body) {
  auto end = body.find_last_not_of(" \t\r\n");
  if (end == std::string::npos) return {};
  body.resize(end + 1);
  for (std::string_view sig : {"Reuter", "REUTER"}) {
    if (body.size() >= sig.size() &&
        std::string_view(body).substr(body.size() - sig.size()) == sig) {
      std::size_t start = body.size() - sig.size();
      if (start == 0 || body[start - 1] == '\n' || body[start - 1] == ' ') {
        body.resize(start);
        break;
      }
    }
  }
  return body;
}

// Text of a TEXT element that has no BODY: the TITLE element, which is read
// separately, and any other markup are dropped.
std::string bare_text(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size();) {
    if (text.substr(i, 7) == "<TITLE>") {
      auto end = text.find("</TITLE>", i);
      i = end == std::string_view::npos ? text.size() : end + 8;
    } else if (text[i] == '<') {
      auto end = text.find('>', i);
      i = end == std::string_view::npos ? text.size() : end + 1;
      out.push_back(' ');
    } else {
      out.push_back(text[i++]);
    }
  }
  return out;
}

std::string attribute(std::string_view tag, std::string_view name) {
  std::string key = std::string(name) + "=\"";
  auto b = tag.find(key);
  if (b == std::string_view::npos) return {};
  b += key.size();
  auto e = tag.find('"', b);
  if (e == std::string_view::npos) return {};
  return std::string(tag.substr(b, e - b));
}

struct Article {
  std::string id;
  std::vector<std::string> topics;
  std::string title;
  std::string body;
  bool has_body = false;
};

template <typename Fn>
void for_each_article(std::istream& in, Fn&& fn) {
  const std::string data{std::istreambuf_iterator<char>(in),
                         std::istreambuf_iterator<char>()};
  const std::string_view all(data);

  std::size_t pos = 0;
  while (true) {
    auto start = all.find("<REUTERS", pos);
    if (start == std::string_view::npos) break;
    auto close = all.find("</REUTERS>", start);
    if (close == std::string_view::npos) {
      throw ParseError("unterminated <REUTERS> element at byte " +
                       std::to_string(start));
    }
    auto tag_end = all.find('>', start);
    auto tag = all.substr(start, tag_end - start);
    auto article = all.substr(tag_end + 1, close - tag_end - 1);
    pos = close + 10;

    Article a;
    a.id = attribute(tag, "NEWID");
    if (a.id.empty()) {
      throw ParseError("<REUTERS> element without NEWID at byte " +
                       std::to_string(start));
    }
    auto topics = between(article, "<TOPICS>", "</TOPICS>");
    std::size_t tp = 0;
    while (true) {
      auto d = topics.find("<D>", tp);
      if (d == std::string_view::npos) break;
      auto de = topics.find("</D>", d);
      if (de == std::string_view::npos) break;
      a.topics.emplace_back(topics.substr(d + 3, de - d - 3));
      tp = de + 4;
    }
    a.title = decode_entities(between(article, "<TITLE>", "</TITLE>"));
    a.has_body = article.find("<BODY>") != std::string_view::npos;
    if (a.has_body) {
      a.body = strip_signature(decode_entities(between(article, "<BODY>", "</BODY>")));
    } else if (auto text = between(article, "<TEXT", "</TEXT>"); !text.empty()) {
      // Unprocessed articles (TYPE="UNPROC") carry bare text.
      auto gt = text.find('>');
      if (gt != std::string_view::npos) {
        a.body = strip_signature(decode_entities(bare_text(text.substr(gt + 1))));
      }
    }
    fn(std::move(a));
  }
}

}  // namespace

std::vector<Document> read_reuters_sgml(std::istream& in) {
  std::vector<Document> docs;
  for_each_article(in, [&](Article a) {
    if (a.topics.empty() || !a.has_body) return;
    docs.push_back(Document::make(std::move(a.id), std::move(a.body),
                                  std::move(a.topics)));
  });
  return docs;
}

std::vector<std::vector<std::string>> read_reuters_sentences(std::istream& in) {
  std::vector<std::vector<std::string>> out;
  for_each_article(in, [&](Article a) {
    auto tokens = tokenize(a.title + "\n" + a.body);
    if (!tokens.empty()) out.push_back(std::move(tokens));
  });
  return out;
}

}  // namespace wvenrich
