public class Home {

    public Home() {
    }
}
