// outcome: value
try { throw "boom" } catch (e) { print(e) } finally { print("done") }
function g() { try { return 1 } finally { print("cleanup") } }
print(g());
try { null.x } catch (e) { print(e.type) }
function h() { for (;;) { try { break } finally { print("left loop") } } return 2 }
print(h());
