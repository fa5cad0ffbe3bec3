#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <csignal>
#include <filesystem>

#include "ruleowl/ns_options.hpp"
#include "ruleowl/ontology_io.hpp"
#include "ruleowl/rule_parser.hpp"
#include "ruleowl/transformer.hpp"
#include "support/generators.hpp"

namespace ruleowl {
namespace {

using CE = ClassExpression;
using RE = RoleExpression;

const char* kStudentWorker = "attends(?x, ?y) ^ Course(?y) ^ worksFor(?x, ?z) ^ Dept(?z) -> StudentWorker(?x)";
const char* kMouseElephant = "Mouse(?x) ^ Elephant(?y) -> smallerThan(?x, ?y)";
const char* kTaughtByUncle = "hasFather(?x, ?y) ^ hasBrother(?y, ?z) ^ taughtBy(?x, ?z) -> TaughtByUncle(?x)";

const char* kPrefixes = "Prefix(:=<http://example.org/uni#>)\n";

std::vector<Axiom> converted(std::string_view text) {
  return std::get<Success>(convert(parse_rule(text).front(), {})).axioms;
}

ParseError parse_error(const std::string& text) {
  try {
    parse_ontology(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "accepted: " << text;
  return ParseError(ParseError::Kind::Syntax, {}, "");
}

TEST(ParseOntology, StudentWorkerAxiom) {
  auto doc = parse_ontology(std::string(kPrefixes) +
                            "Ontology(<http://example.org/uni>\n"
                            "SubClassOf(ObjectIntersectionOf(ObjectSomeValuesFrom(:attends :Course) "
                            "ObjectSomeValuesFrom(:worksFor :Dept)) :StudentWorker)\n)");
  ASSERT_EQ(doc.axioms.size(), 1u);
  EXPECT_EQ(doc.axioms[0], converted(kStudentWorker)[0]);
  EXPECT_EQ(doc.ontology_iri, "http://example.org/uni");
  EXPECT_EQ(doc.prefixes, (std::vector<std::pair<std::string, std::string>>{{"", "http://example.org/uni#"}}));
}

TEST(ParseOntology, EmptyOntology) {
  auto doc = parse_ontology("Ontology()");
  EXPECT_TRUE(doc.axioms.empty());
  EXPECT_FALSE(doc.ontology_iri);
}

TEST(ParseOntology, SelfRestrictionAndChain) {
  auto doc = parse_ontology(std::string(kPrefixes) +
                            "Ontology(SubClassOf(:Mouse ObjectHasSelf(:R_Mouse))\n"
                            "SubObjectPropertyOf(ObjectPropertyChain(:R_Mouse owl:topObjectProperty :R_Elephant) "
                            ":smallerThan))");
  ASSERT_EQ(doc.axioms.size(), 2u);
  auto want = converted(kMouseElephant);
  EXPECT_EQ(doc.axioms[0], want[0]);
  EXPECT_EQ(doc.axioms[1], want[2]);
}

TEST(ParseOntology, ReservedNames) {
  auto doc = parse_ontology(std::string(kPrefixes) +
                            "Ontology(SubClassOf(owl:Thing ObjectSomeValuesFrom(ObjectInverseOf(:p) owl:Thing)))");
  EXPECT_EQ(doc.axioms[0], Axiom(SubClassOf{CE::top(), CE::some(RE::inverse(RE::named("p")), CE::top())}));
}

TEST(ParseOntology, AnnotatedRule) {
  auto doc = parse_ontology(std::string(kPrefixes) +
                            "Ontology(DLSafeRule(Annotation(rowl:nominalSchemaVariables \"z\") "
                            "Body(ObjectPropertyAtom(:hasFather Variable(var:x) Variable(var:y)) "
                            "ObjectPropertyAtom(:hasBrother Variable(var:y) Variable(var:z)) "
                            "ObjectPropertyAtom(:taughtBy Variable(var:x) Variable(var:z))) "
                            "Head(ClassAtom(:TaughtByUncle Variable(var:x)))))");
  auto r = parse_rule(kTaughtByUncle).front();
  EXPECT_EQ(doc.axioms[0], annotate_rule(r, {{"z"}}));
}

TEST(ParseOntology, RejectsOutsideSubset) {
  auto e = parse_error(std::string(kPrefixes) + "Ontology(\nEquivalentClasses(:A :B))");
  EXPECT_EQ(e.position(), (Position{3, 1}));
  parse_error(std::string(kPrefixes) + "Ontology(SubClassOf(:A ObjectAllValuesFrom(:r :B)))");
  parse_error(std::string(kPrefixes) + "Ontology(SubClassOf(:A))");
  parse_error(std::string(kPrefixes) + "Ontology(SubClassOf(ex:A :B))");  // undeclared prefix
  parse_error(std::string(kPrefixes) + "Ontology(Declaration(DataProperty(:d)))");
  parse_error(std::string(kPrefixes) + "Ontology(SubClassOf(ObjectIntersectionOf(:A) :B))");
  parse_error(std::string(kPrefixes) + "Ontology(SubObjectPropertyOf(:r owl:topObjectProperty))");
  parse_error("Prefix(owl:=<http://wrong#>) Ontology()");
  parse_error(std::string(kPrefixes) + "Ontology() trailing");
  parse_error(std::string(kPrefixes) + "Ontology(DLSafeRule(Body(ClassAtom(:A Variable(var:x))) Head(ClassAtom(:B Variable(var:y)))))");
  parse_error(std::string(kPrefixes) + "Ontology(SubClassOf(:A :B)");
}

TEST(SerializeOntology, EmptyDocument) {
  auto text = serialize_ontology(OntologyDocument::empty("http://example.org/o#"));
  EXPECT_EQ(text,
            "Prefix(:=<http://example.org/o#>)\n"
            "Prefix(owl:=<http://www.w3.org/2002/07/owl#>)\n"
            "Prefix(rowl:=<urn:rowl#>)\n"
            "Prefix(var:=<urn:swrl:var#>)\n\n"
            "Ontology()\n");
}

TEST(SerializeOntology, AnnotatedRule) {
  auto r = parse_rule(kTaughtByUncle).front();
  EXPECT_EQ(functional(annotate_rule(r, {{"z"}})),
            "DLSafeRule(Annotation(rowl:nominalSchemaVariables \"z\") "
            "Body(ObjectPropertyAtom(:hasFather Variable(var:x) Variable(var:y)) "
            "ObjectPropertyAtom(:hasBrother Variable(var:y) Variable(var:z)) "
            "ObjectPropertyAtom(:taughtBy Variable(var:x) Variable(var:z))) "
            "Head(ClassAtom(:TaughtByUncle Variable(var:x))))");
}

TEST(SerializeOntology, StudentWorkerRoundTrip) {
  auto doc = OntologyDocument::empty();
  doc.ontology_iri = "http://example.org/uni";
  doc.axioms = converted(kStudentWorker);
  EXPECT_EQ(parse_ontology(serialize_ontology(doc)), doc);
}

TEST(SerializeOntology, RoundTripsGeneratedDocuments) {
  testing::Gen gen(99);
  for (int i = 0; i < 200; ++i) {
    auto doc = gen.document();
    auto text = serialize_ontology(doc);
    EXPECT_EQ(parse_ontology(text), doc) << text;
    EXPECT_EQ(serialize_ontology(parse_ontology(text)), text);
  }
}

TEST(SerializeOntology, EscapesAnnotationStrings) {
  auto doc = OntologyDocument::empty();
  doc.axioms.push_back(AnnotatedSwrlRule{parse_rule("A(?x) -> B(?x)").front(), {{"rowl:note", "say \"hi\" \\ bye"}}});
  EXPECT_EQ(parse_ontology(serialize_ontology(doc)), doc);
}

TEST(MissingDeclarations, StudentWorkerAgainstEmptyOntology) {
  auto decls = missing_declarations(converted(kStudentWorker), {});
  EXPECT_EQ(decls, (std::vector<Declaration>{{EntityKind::Class, "Course"},
                                             {EntityKind::Class, "Dept"},
                                             {EntityKind::Class, "StudentWorker"},
                                             {EntityKind::ObjectProperty, "attends"},
                                             {EntityKind::ObjectProperty, "worksFor"}}));
}

TEST(MissingDeclarations, FullyDeclared) {
  auto axioms = converted(kStudentWorker);
  EXPECT_TRUE(missing_declarations(axioms, signature_of(axioms)).empty());
}

TEST(MissingDeclarations, IncludesFreshRoles) {
  auto decls = missing_declarations(converted(kMouseElephant), {});
  EXPECT_NE(std::find(decls.begin(), decls.end(), Declaration{EntityKind::ObjectProperty, "R_Mouse"}), decls.end());
  EXPECT_NE(std::find(decls.begin(), decls.end(), Declaration{EntityKind::ObjectProperty, "R_Elephant"}), decls.end());
}

TEST(RenderManchester, Examples) {
  auto sw = converted(kStudentWorker);
  EXPECT_EQ(render_manchester(sw[0]), "(attends some Course) and (worksFor some Dept) SubClassOf StudentWorker");
  auto me = converted(kMouseElephant);
  EXPECT_EQ(render_manchester(me[0]), "Mouse SubClassOf R_Mouse Self");
  EXPECT_EQ(render_manchester(me[2]), "R_Mouse o owl:topObjectProperty o R_Elephant SubPropertyOf smallerThan");
  EXPECT_EQ(render_manchester(SubObjectPropertyOf{{RE::named("R")}, "S"}), "R SubPropertyOf S");
  EXPECT_EQ(render_manchester(SubObjectPropertyOf{{RE::inverse(RE::named("R"))}, "S"}), "inverse R SubPropertyOf S");
  EXPECT_EQ(render_manchester(SubClassOf{CE::top(), CE::named("A")}), "owl:Thing SubClassOf A");
  EXPECT_EQ(render_manchester(Declaration{EntityKind::Class, "A"}), "Class: A");
}

TEST(Commit, DeclaresMissingThenAppends) {
  auto doc = OntologyDocument::empty();
  auto out = commit(doc, converted(kStudentWorker), true);
  ASSERT_EQ(out.document.axioms.size(), 6u);
  for (int i = 0; i < 5; ++i) EXPECT_TRUE(std::holds_alternative<Declaration>(out.document.axioms[i]));
  EXPECT_TRUE(std::holds_alternative<SubClassOf>(out.document.axioms[5]));
  EXPECT_EQ(out.added.size(), 6u);
  EXPECT_TRUE(missing_declarations(out.document.axioms, out.document.signature()).empty());

  auto again = commit(out.document, converted(kStudentWorker), true);
  EXPECT_EQ(again.document, out.document);
  EXPECT_TRUE(again.added.empty());
  EXPECT_EQ(again.notices.size(), 1u);
}

TEST(Commit, DedupIsStructuralAfterCanonicalize) {
  auto doc = OntologyDocument::empty();
  doc.axioms.push_back(SubClassOf{CE::intersection({CE::named("B"), CE::named("A")}), CE::named("C")});
  auto out = commit(doc, {SubClassOf{CE::intersection({CE::named("A"), CE::named("B")}), CE::named("C")}}, false);
  EXPECT_TRUE(out.added.empty());
}

TEST(Commit, NeverReordersExistingAxioms) {
  testing::Gen gen(5);
  for (int i = 0; i < 50; ++i) {
    auto doc = gen.document();
    auto out = commit(doc, {gen.axiom(), gen.axiom()}, gen.coin());
    ASSERT_GE(out.document.axioms.size(), doc.axioms.size());
    EXPECT_TRUE(std::equal(doc.axioms.begin(), doc.axioms.end(), out.document.axioms.begin()));
  }
}

TEST(Commit, AnnotatedRuleAppendsDLSafeRule) {
  auto r = parse_rule(kTaughtByUncle).front();
  auto out = commit(OntologyDocument::empty(), {annotate_rule(r, {{"z"}})}, false);
  ASSERT_EQ(out.document.axioms.size(), 1u);
  EXPECT_EQ(functional(out.document.axioms[0]).rfind("DLSafeRule(Annotation(rowl:nominalSchemaVariables \"z\")", 0), 0u);
}

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() / ("ruleowl_io_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }
  std::filesystem::path dir_;
};

using AtomicWrite = TempDir;

TEST_F(AtomicWrite, ReplacesFile) {
  auto path = (dir_ / "o.ofn").string();
  auto doc = OntologyDocument::empty();
  save_ontology(path, doc);
  doc.axioms = converted(kStudentWorker);
  save_ontology(path, doc);
  EXPECT_EQ(load_ontology(path), doc);
}

TEST_F(AtomicWrite, KilledWriterLeavesOldFileIntact) {
  auto path = (dir_ / "o.ofn").string();
  auto old_doc = OntologyDocument::empty();
  old_doc.axioms = converted(kStudentWorker);
  save_ontology(path, old_doc);
  const auto old_text = read_file(path);

  auto big = OntologyDocument::empty();
  testing::Gen gen(1);
  for (int i = 0; i < 2000; ++i) big.axioms.push_back(gen.axiom());

  pid_t pid = ::fork();
  ASSERT_GE(pid, 0);
  if (pid == 0) {
    write_file_atomic(path, serialize_ontology(big), [] { ::raise(SIGKILL); });
    ::_exit(0);
  }
  int status = 0;
  ::waitpid(pid, &status, 0);
  ASSERT_TRUE(WIFSIGNALED(status));
  EXPECT_EQ(WTERMSIG(status), SIGKILL);
  EXPECT_EQ(read_file(path), old_text);
  EXPECT_EQ(load_ontology(path), old_doc);
}

}  // namespace
}  // namespace ruleowl
