#include "doctest.h"

#include "skipalign/io.hpp"
#include "skipalign/model.hpp"
#include "support/testutil.hpp"

using namespace skipalign;
using testsupport::code_of;

namespace {
Model mk(const char* text) { return validate_model(parse_tree_text(text)); }
}

TEST_CASE("preorder block ids, parents, depths") {
    Model m = mk("->(a,X(b,c),d)");
    REQUIRE(m.size() == 6);
    CHECK(m.root() == 0);
    CHECK(m.block(0).kind == BlockKind::Seq);
    CHECK(m.block(1).kind == BlockKind::Activity);
    CHECK(m.block(1).label == "a");
    CHECK(m.block(2).kind == BlockKind::Xor);
    CHECK(m.block(3).label == "b");
    CHECK(m.block(4).label == "c");
    CHECK(m.block(5).label == "d");
    CHECK(m.block(0).children == std::vector<BlockId>{1, 2, 5});
    CHECK(m.block(2).children == std::vector<BlockId>{3, 4});
    CHECK(m.block(3).parent == 2);
    CHECK(m.block(5).parent == 0);
    CHECK(m.block(0).parent == kNoBlock);
    CHECK(m.block(0).depth == 0);
    CHECK(m.block(2).depth == 1);
    CHECK(m.block(4).depth == 2);
    CHECK(m.block(2).index_in_parent == 1);
}

TEST_CASE("subtree relation follows preorder ranges") {
    Model m = mk("->(a,X(b,c),d)");
    CHECK(m.in_subtree(3, 2));
    CHECK(m.in_subtree(2, 2));
    CHECK(m.in_subtree(4, 0));
    CHECK(!m.in_subtree(5, 2));
    CHECK(!m.in_subtree(2, 3));
}

TEST_CASE("kappa minimal visible execution cost") {
    CHECK(mk("a").block(0).kappa == 1);
    CHECK(mk("tau").block(0).kappa == 0);
    CHECK(mk("X(a,->(b,c))").block(0).kappa == 1);
    CHECK(mk("X(tau,a)").block(0).kappa == 0);
    CHECK(mk("+(a,tau)").block(0).kappa == 1);
    CHECK(mk("*(a,b)").block(0).kappa == 1);       // loop costs its do-part
    CHECK(mk("*(X(tau,a),b)").block(0).kappa == 0);
    CHECK(mk("->(a,X(b,c),d)").block(0).kappa == 3);
    Model m = mk("->(a,X(b,c),d)");
    CHECK(min_skip_cost(m, 2) == 1);
    CHECK(min_skip_cost(m, 0) == 3);
}

TEST_CASE("leaves and label lookup") {
    Model m = mk("->(a,X(b,a),tau)");
    CHECK(m.leaves() == std::vector<BlockId>{1, 3, 4, 5});
    CHECK(m.leaves_with_label("a") == std::vector<BlockId>{1, 4});
    CHECK(m.leaves_with_label("zz").empty());
}

TEST_CASE("validation errors") {
    CHECK(code_of([] { return validate_model(TreeNode::empty()); }) == Errc::EmptyTree);
    CHECK(code_of([] { return validate_model(TreeNode::activity("")); }) ==
          Errc::EmptyLabel);
    CHECK(code_of([] {
              return validate_model(
                  TreeNode::op(BlockKind::Loop, {TreeNode::activity("a")}));
          }) == Errc::ArityViolation);
    CHECK(code_of([] { return validate_model(TreeNode::op(BlockKind::Seq, {})); }) ==
          Errc::ArityViolation);
    TreeNode leaf_with_kids = TreeNode::activity("a");
    leaf_with_kids.children.push_back(TreeNode::activity("b"));
    CHECK(code_of([&] { return validate_model(leaf_with_kids); }) ==
          Errc::ArityViolation);
}

TEST_CASE("block lookup is bounds-checked") {
    Model m = mk("a");
    CHECK(code_of([&] { return m.block(7); }) == Errc::UnknownBlock);
}

TEST_CASE("single-child operators are allowed except loop") {
    CHECK(mk("->(a)").size() == 2);
    CHECK(mk("X(a)").size() == 2);
    CHECK(mk("+(a)").size() == 2);
}
