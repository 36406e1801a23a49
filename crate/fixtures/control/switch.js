// outcome: value
function f(x) {
  var out = "";
  switch (x) {
    case 1: out += "a";
    case 2: out += "b"; break;
    default: out += "d";
    case 3: out += "c" }
  return out }
print(f(1)); print(f(2)); print(f(3)); print(f(9));
