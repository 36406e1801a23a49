// outcome: value
var o = {a: 1, b: 2};
var ks = "";
var n = 0;
for (var k in o) { ks += k; n += o[k] }
print(ks);
print(n);
